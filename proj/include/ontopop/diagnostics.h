#ifndef ONTOPOP_DIAGNOSTICS_H_
#define ONTOPOP_DIAGNOSTICS_H_

#include <string>
#include <vector>

namespace ontopop {

// Collects non-fatal warnings so callers can print or report them.
class Diagnostics {
 public:
  void warn(std::string message) { warnings_.push_back(std::move(message)); }

  void merge(const Diagnostics &other) {
    warnings_.insert(warnings_.end(), other.warnings_.begin(),
                     other.warnings_.end());
  }

  const std::vector<std::string> &warnings() const { return warnings_; }
  bool empty() const { return warnings_.empty(); }

 private:
  std::vector<std::string> warnings_;
};

inline void warn(Diagnostics *diag, std::string message) {
  if (diag != nullptr) diag->warn(std::move(message));
}

}  // namespace ontopop

#endif  // ONTOPOP_DIAGNOSTICS_H_
