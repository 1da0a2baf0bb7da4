#ifndef TPLP_WORLD_HPP
#define TPLP_WORLD_HPP

#include <cstdint>
#include <map>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "tplp/core.hpp"
#include "tplp/grounder.hpp"
#include "tplp/rational.hpp"

namespace tplp {

/// A possible world: one truth value per Herbrand base position.
class World {
public:
  World() = default;
  explicit World(std::size_t atoms) : bits_(atoms) {}

  /// Bit i of `index` is the truth value of atom i.
  static World from_index(std::uint64_t index, std::size_t atoms);
  std::uint64_t to_index() const;

  std::size_t size() const { return bits_.size(); }
  bool test(std::size_t i) const { return bits_.test(i); }
  World& set(std::size_t i, bool value = true) {
    bits_.set(i, value);
    return *this;
  }
  bool none() const { return bits_.none(); }
  std::size_t count() const { return bits_.count(); }

  friend bool operator==(const World& a, const World& b) { return a.bits_ == b.bits_; }
  friend bool operator<(const World& a, const World& b) {
    return a.size() != b.size() ? a.size() < b.size() : a.bits_ < b.bits_;
  }

private:
  boost::dynamic_bitset<> bits_;
};

/// Sparse probability mass over worlds; absent worlds have mass 0.
class WorldDistribution {
public:
  WorldDistribution() = default;
  explicit WorldDistribution(std::size_t atoms) : atoms_(atoms) {}

  std::size_t atoms() const { return atoms_; }

  /// Sets (not adds) the mass of w; zero removes the entry.
  void set(const World& w, const Rational& p);
  void add(const World& w, const Rational& p);
  Rational at(const World& w) const;

  Rational total() const;
  /// All masses non-negative and summing to exactly 1.
  bool is_normalized() const;

  const std::map<World, Rational>& entries() const { return mass_; }
  auto begin() const { return mass_.begin(); }
  auto end() const { return mass_.end(); }
  std::size_t support_size() const { return mass_.size(); }

  friend bool operator==(const WorldDistribution& a, const WorldDistribution& b) {
    return a.atoms_ == b.atoms_ && a.mass_ == b.mass_;
  }

private:
  std::size_t atoms_ = 0;
  std::map<World, Rational> mass_;
};

/// Truth of a ground basic formula in a world over `base`.
/// Throws AtomNotInBase if an atom of f has no position in base.
bool world_satisfies(const World& w, const BasicFormula& f, const HerbrandBase& base);

/// Sum of the masses of the worlds satisfying f.
Rational formula_mass(const WorldDistribution& ki, const BasicFormula& f, const HerbrandBase& base);

/// Base positions of f's atoms; throws AtomNotInBase.
std::vector<std::size_t> atom_indices(const BasicFormula& f, const HerbrandBase& base);

/// Satisfaction on a world given as an index, for precomputed atom positions.
bool index_satisfies(std::uint64_t world, Connective connective, const std::vector<std::size_t>& atoms);

/// Shannon entropy in nats.
double entropy(const WorldDistribution& ki);

}  // namespace tplp

#endif
