#pragma once

#include <stdexcept>
#include <string>

namespace specstab {

// Base for every error thrown by the library. what() carries the detail,
// name() the stable class tag used by the CLI exit paths.
class Error : public std::runtime_error {
 public:
  Error(std::string name, const std::string& msg)
      : std::runtime_error(name + ": " + msg), name_(std::move(name)) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

#define SPECSTAB_DEFINE_ERROR(E)                                   \
  class E : public Error {                                         \
   public:                                                         \
    explicit E(const std::string& msg) : Error(#E, msg) {}         \
  }

SPECSTAB_DEFINE_ERROR(DomainError);        // argument outside a documented domain
SPECSTAB_DEFINE_ERROR(EmptyDomain);        // raster or node set unexpectedly empty
SPECSTAB_DEFINE_ERROR(MarginError);        // set touches the box frame
SPECSTAB_DEFINE_ERROR(ModulusError);       // declared modulus bound violated
SPECSTAB_DEFINE_ERROR(CoefficientError);   // coefficient field fails validation
SPECSTAB_DEFINE_ERROR(NumericsError);      // factorization / iteration failure
SPECSTAB_DEFINE_ERROR(StateError);         // required precomputation missing
SPECSTAB_DEFINE_ERROR(RankError);          // generating set numerically rank deficient
SPECSTAB_DEFINE_ERROR(ResolutionError);    // discretization dominates the measurement
SPECSTAB_DEFINE_ERROR(GapError);           // spectral cluster not isolated
SPECSTAB_DEFINE_ERROR(InapplicableError);  // hypothesis of an audited lemma fails
SPECSTAB_DEFINE_ERROR(ConfigError);        // config parse / validation failure

#undef SPECSTAB_DEFINE_ERROR

}  // namespace specstab
