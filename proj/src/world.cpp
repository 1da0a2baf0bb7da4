#include "tplp/world.hpp"

#include <cmath>
#include <stdexcept>

#include "tplp/errors.hpp"

namespace tplp {

World World::from_index(std::uint64_t index, std::size_t atoms) {
  World w(atoms);
  for (std::size_t i = 0; i < atoms; ++i)
    if ((index >> i) & 1U) w.set(i);
  return w;
}

std::uint64_t World::to_index() const {
  if (bits_.size() > 64) throw std::out_of_range("world has more than 64 atoms");
  std::uint64_t out = 0;
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_.test(i)) out |= std::uint64_t{1} << i;
  return out;
}

void WorldDistribution::set(const World& w, const Rational& p) {
  if (p == 0) {
    mass_.erase(w);
  } else {
    mass_[w] = p;
  }
}

void WorldDistribution::add(const World& w, const Rational& p) {
  if (p == 0) return;
  auto& slot = mass_[w];
  slot += p;
  if (slot == 0) mass_.erase(w);
}

Rational WorldDistribution::at(const World& w) const {
  auto it = mass_.find(w);
  return it == mass_.end() ? Rational(0) : it->second;
}

Rational WorldDistribution::total() const {
  Rational sum = 0;
  for (const auto& [w, p] : mass_) sum += p;
  return sum;
}

bool WorldDistribution::is_normalized() const {
  for (const auto& [w, p] : mass_)
    if (p < 0 || w.size() != atoms_) return false;
  return total() == 1;
}

std::vector<std::size_t> atom_indices(const BasicFormula& f, const HerbrandBase& base) {
  std::vector<std::size_t> out;
  out.reserve(f.atoms.size());
  for (const auto& a : f.atoms) {
    auto i = base.index_of(a);
    if (!i) throw AtomNotInBase("atom " + to_string(a) + " is not in the Herbrand base");
    out.push_back(*i);
  }
  return out;
}

bool index_satisfies(std::uint64_t world, Connective connective, const std::vector<std::size_t>& atoms) {
  if (connective == Connective::Or) {
    for (auto i : atoms)
      if ((world >> i) & 1U) return true;
    return false;
  }
  for (auto i : atoms)
    if (!((world >> i) & 1U)) return false;
  return true;
}

bool world_satisfies(const World& w, const BasicFormula& f, const HerbrandBase& base) {
  auto idx = atom_indices(f, base);
  if (f.connective == Connective::Or) {
    for (auto i : idx)
      if (w.test(i)) return true;
    return false;
  }
  for (auto i : idx)
    if (!w.test(i)) return false;
  return true;
}

Rational formula_mass(const WorldDistribution& ki, const BasicFormula& f, const HerbrandBase& base) {
  auto idx = atom_indices(f, base);
  Rational sum = 0;
  for (const auto& [w, p] : ki) {
    bool sat = f.connective == Connective::Or ? false : true;
    for (auto i : idx) {
      if (f.connective == Connective::Or) {
        if (w.test(i)) {
          sat = true;
          break;
        }
      } else if (!w.test(i)) {
        sat = false;
        break;
      }
    }
    if (sat) sum += p;
  }
  return sum;
}

double entropy(const WorldDistribution& ki) {
  double h = 0;
  for (const auto& [w, p] : ki) {
    double x = to_double(p);
    if (x > 0) h -= x * std::log(x);
  }
  return h;
}

}  // namespace tplp
