#ifndef TPLP_ERRORS_HPP
#define TPLP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tplp {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

#define TPLP_DEFINE_ERROR(Name)        \
  class Name : public Error {          \
  public:                              \
    using Error::Error;                \
  }

TPLP_DEFINE_ERROR(NonNormalConstraint);
TPLP_DEFINE_ERROR(UniverseEmpty);
TPLP_DEFINE_ERROR(GroundingError);
TPLP_DEFINE_ERROR(AtomNotInBase);
TPLP_DEFINE_ERROR(InconsistentProgram);
TPLP_DEFINE_ERROR(NonConvergence);
TPLP_DEFINE_ERROR(LPNumericalFailure);
TPLP_DEFINE_ERROR(MissingTimeSlice);
TPLP_DEFINE_ERROR(TimePointOutsideCalendar);

#undef TPLP_DEFINE_ERROR

/// Raised when the Herbrand base exceeds the configured world cap.
class BaseTooLarge : public Error {
public:
  BaseTooLarge(std::size_t size, std::size_t cap)
      : Error("Herbrand base has " + std::to_string(size) + " atoms, above the world cap of " +
              std::to_string(cap) + "; try --grounding relevant or raise --max-world-atoms"),
        size_(size),
        cap_(cap) {}
  std::size_t size() const { return size_; }
  std::size_t cap() const { return cap_; }

private:
  std::size_t size_;
  std::size_t cap_;
};

}  // namespace tplp

#endif
