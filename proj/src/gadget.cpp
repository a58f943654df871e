#include "tilt/gadget.hpp"

#include <stdexcept>

namespace tilt {

const Port& Gadget::port(const std::string& n) const {
  for (const auto& p : ports)
    if (p.name == n) return p;
  throw std::out_of_range("gadget " + name + " has no port " + n);
}

bool Gadget::has_port(const std::string& n) const {
  for (const auto& p : ports)
    if (p.name == n) return true;
  return false;
}

std::vector<const Port*> Gadget::inputs() const {
  std::vector<const Port*> out;
  for (const auto& p : ports)
    if (p.direction == Port::Direction::Input) out.push_back(&p);
  return out;
}

std::vector<const Port*> Gadget::outputs() const {
  std::vector<const Port*> out;
  for (const auto& p : ports)
    if (p.direction == Port::Direction::Output) out.push_back(&p);
  return out;
}

}  // namespace tilt
