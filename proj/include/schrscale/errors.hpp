#pragma once

#include <stdexcept>
#include <string>

namespace schrscale {

// Mode index outside the model's spectrum (box modes start at 1, oscillator
// at 0, table modes must be listed).
class IndexError : public std::out_of_range {
public:
    explicit IndexError(const std::string& what) : std::out_of_range(what) {}
};

// Operation not defined for the model or representation at hand, e.g.
// eigenfunctions of a table spectrum or H applied to an infinite expansion.
class UnsupportedOperation : public std::logic_error {
public:
    explicit UnsupportedOperation(const std::string& what) : std::logic_error(what) {}
};

// Spatial argument outside the model's configuration domain.
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Normalization requested for a state with no mass at all.
class EmptyState : public std::invalid_argument {
public:
    explicit EmptyState(const std::string& what) : std::invalid_argument(what) {}
};

// The coefficient series has infinite weight (tail decays too slowly).
class NotNormalizable : public std::invalid_argument {
public:
    explicit NotNormalizable(const std::string& what) : std::invalid_argument(what) {}
};

// Energy window with a >= b.
class BadWindow : public std::invalid_argument {
public:
    explicit BadWindow(const std::string& what) : std::invalid_argument(what) {}
};

// Multiplier whose deviation |lambda - u(lambda)| is unbounded over the
// spectrum in use, or a table multiplier that does not cover a mode.
class NotInExtensionFamily : public std::invalid_argument {
public:
    explicit NotInExtensionFamily(const std::string& what) : std::invalid_argument(what) {}
};

// Zero or otherwise unusable finite-difference step.
class BadStep : public std::invalid_argument {
public:
    explicit BadStep(const std::string& what) : std::invalid_argument(what) {}
};

// Box-counting scales too fine for the sample spacing.
class ResolutionError : public std::invalid_argument {
public:
    explicit ResolutionError(const std::string& what) : std::invalid_argument(what) {}
};

// Probability density at the evaluation point is below the node guard.
class NodeProximity : public std::runtime_error {
public:
    explicit NodeProximity(const std::string& what) : std::runtime_error(what) {}
};

// Operation needs a finite spectral expansion (window the state first).
class DomainRequired : public std::invalid_argument {
public:
    explicit DomainRequired(const std::string& what) : std::invalid_argument(what) {}
};

} // namespace schrscale
