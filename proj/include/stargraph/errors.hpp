#pragma once

#include <stdexcept>
#include <string>

namespace stargraph {

/// Root of every error the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Edge count or truncation out of range.
class InvalidGraphError : public Error {
public:
    using Error::Error;
};

/// A StarPoint that does not live on the graph it is used with.
class InvalidPointError : public Error {
public:
    using Error::Error;
};

/// NaN or infinite input samples.
class NumericalInputError : public Error {
public:
    using Error::Error;
};

/// Grids or edge counts that do not line up.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Time or parameter outside the domain where a formula is evaluated.
class DomainError : public Error {
public:
    using Error::Error;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

/// b(0) != 0: the odd extension of the drift would jump at the origin.
class IllPosedExtensionError : public Error {
public:
    using Error::Error;
};

/// Line solutions that violate the vertex conditions when folded onto the star.
class FoldError : public Error {
public:
    FoldError(double continuity_defect, double kirchhoff_defect)
        : Error("vertex consistency violated: continuity defect " +
                std::to_string(continuity_defect) + ", kirchhoff defect " +
                std::to_string(kirchhoff_defect)),
          continuity(continuity_defect),
          kirchhoff(kirchhoff_defect) {}

    double continuity;
    double kirchhoff;
};

class StabilityError : public Error {
public:
    using Error::Error;
};

/// Too few grid points for a finite-difference stencil.
class StencilError : public Error {
public:
    using Error::Error;
};

class AssemblyError : public Error {
public:
    using Error::Error;
};

/// Malformed CSV or JSON input.
class FormatError : public Error {
public:
    using Error::Error;
};

}  // namespace stargraph
