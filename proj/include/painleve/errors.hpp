#pragma once

#include <stdexcept>
#include <string>

namespace painleve {

enum class Errc {
    NonCanonicalParams,
    BadBranchIndex,
    BadSectorIndex,
    FieldMismatch,
    ExactBackendUnavailable,
    BackendOverflow,
    ZeroX,
    ZeroDelta,
    ZeroU,
    UnsupportedFamily,
    TrivialBranch,
    DiscontinuousJoin,
    ZeroXOnPath,
    ToleranceFailure,
    NoBlowupSignature,
    SeedOutsideSector,
    NoOverlap,
    InsufficientSamples,
    PerturbationEscaped,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
  public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
    Errc code() const { return code_; }

  private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace painleve
