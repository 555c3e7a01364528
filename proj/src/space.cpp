#include "fbsim/space.hpp"

#include <set>
#include <sstream>

namespace fbsim {

SpaceSignature::SpaceSignature(std::vector<Subsystem> subsystems)
    : subsystems_(std::move(subsystems)) {
  std::set<std::string> seen;
  for (const auto& s : subsystems_) {
    if (s.label.empty()) throw SpaceError("subsystem label must be nonempty");
    if (!seen.insert(s.label).second)
      throw SpaceError("duplicate subsystem label '" + s.label + "'");
    if (s.kind == SubsystemKind::Qubit && s.dim != 2)
      throw SpaceError("qubit subsystem '" + s.label + "' must have dim 2");
    if (s.kind == SubsystemKind::Fock && s.dim < 2)
      throw SpaceError("fock subsystem '" + s.label + "' needs dim >= 2");
    total_dim_ *= s.dim;
  }
}

SpaceSignature SpaceSignature::single_fock(const std::string& label, int dim) {
  return SpaceSignature({{label, SubsystemKind::Fock, dim}});
}

SpaceSignature SpaceSignature::two_fock(int dim) {
  return SpaceSignature({{"1", SubsystemKind::Fock, dim},
                         {"2", SubsystemKind::Fock, dim}});
}

int SpaceSignature::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < subsystems_.size(); ++i)
    if (subsystems_[i].label == label) return static_cast<int>(i);
  return -1;
}

const Subsystem& SpaceSignature::by_label(const std::string& label) const {
  int i = index_of(label);
  if (i < 0) throw SpaceError("unknown subsystem label '" + label + "'");
  return subsystems_[static_cast<std::size_t>(i)];
}

int SpaceSignature::dim_before(std::size_t i) const {
  int d = 1;
  for (std::size_t k = 0; k < i; ++k) d *= subsystems_[k].dim;
  return d;
}

int SpaceSignature::dim_after(std::size_t i) const {
  int d = 1;
  for (std::size_t k = i + 1; k < subsystems_.size(); ++k) d *= subsystems_[k].dim;
  return d;
}

bool SpaceSignature::operator==(const SpaceSignature& other) const {
  if (subsystems_.size() != other.subsystems_.size()) return false;
  for (std::size_t i = 0; i < subsystems_.size(); ++i) {
    const auto& a = subsystems_[i];
    const auto& b = other.subsystems_[i];
    if (a.label != b.label || a.kind != b.kind || a.dim != b.dim) return false;
  }
  return true;
}

std::string SpaceSignature::describe() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < subsystems_.size(); ++i) {
    if (i) os << ", ";
    os << subsystems_[i].label << ":"
       << (subsystems_[i].kind == SubsystemKind::Qubit ? "qubit" : "fock") << ":"
       << subsystems_[i].dim;
  }
  os << "]";
  return os.str();
}

}  // namespace fbsim
