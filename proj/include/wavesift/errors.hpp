#pragma once

#include <stdexcept>
#include <string>

namespace wavesift {

/// Base class of every error thrown by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// mesh
struct NonConformingMesh : Error { using Error::Error; };
struct EmptyActiveSet : Error { using Error::Error; };

// physics
struct DomainError : Error { using Error::Error; };
struct SingularPoint : Error { using Error::Error; };
struct ReceiverInsideDomain : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };

// forward
struct SingularSystem : Error { using Error::Error; };
struct InverseCrime : Error { using Error::Error; };

// inversion
struct AllEqual : Error { using Error::Error; };
struct TooShort : Error { using Error::Error; };
struct EmptyThresholdSet : Error { using Error::Error; };
struct NoScattererDetected : Error { using Error::Error; };

// scenarios
struct UnknownPhantom : Error { using Error::Error; };

// io / cli
struct UnknownFormat : Error { using Error::Error; };
struct IterationOutOfRange : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

} // namespace wavesift
