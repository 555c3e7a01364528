#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace fbsim {

/// Error raised when an operation is handed operators/states living on
/// different tensor spaces, or a space declaration is malformed.
class SpaceError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class SubsystemKind { Qubit, Fock };

struct Subsystem {
  std::string label;
  SubsystemKind kind = SubsystemKind::Fock;
  int dim = 2;
};

/// Ordered list of qubit / truncated-Fock subsystems. Operators and states
/// carry one of these and are dense matrices on the product space, with the
/// first subsystem as the slowest tensor index.
class SpaceSignature {
 public:
  SpaceSignature() = default;
  explicit SpaceSignature(std::vector<Subsystem> subsystems);

  static SpaceSignature single_fock(const std::string& label, int dim);
  static SpaceSignature two_fock(int dim);  // labels "1", "2"

  const std::vector<Subsystem>& subsystems() const { return subsystems_; }
  std::size_t size() const { return subsystems_.size(); }
  int total_dim() const { return total_dim_; }

  const Subsystem& at(std::size_t i) const { return subsystems_.at(i); }
  int index_of(const std::string& label) const;  // -1 if absent
  const Subsystem& by_label(const std::string& label) const;

  /// Dimension of everything before / after subsystem i.
  int dim_before(std::size_t i) const;
  int dim_after(std::size_t i) const;

  bool operator==(const SpaceSignature& other) const;
  bool operator!=(const SpaceSignature& other) const { return !(*this == other); }

  std::string describe() const;

 private:
  std::vector<Subsystem> subsystems_;
  int total_dim_ = 1;
};

inline void require_same_space(const SpaceSignature& a, const SpaceSignature& b,
                               const char* what) {
  if (a != b) throw SpaceError(std::string(what) + ": space mismatch (" +
                               a.describe() + " vs " + b.describe() + ")");
}

}  // namespace fbsim
