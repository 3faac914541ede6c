#ifndef ROTSUM_ERRORS_HPP
#define ROTSUM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rotsum {

// Expansion too shallow for the requested renewal index / level.
struct InsufficientDepth : std::runtime_error {
    explicit InsufficientDepth(const std::string& what) : std::runtime_error(what) {}
};

// A point handed to a cycle/induced-map routine lies outside its domain.
struct PointOutsideDomain : std::domain_error {
    explicit PointOutsideDomain(const std::string& what) : std::domain_error(what) {}
};

// An orbit point landed exactly on a singularity of the summand.
struct SingularHit : std::domain_error {
    explicit SingularHit(const std::string& what) : std::domain_error(what) {}
};

// Two empirical distributions of different kinds were compared.
struct KindMismatch : std::invalid_argument {
    explicit KindMismatch(const std::string& what) : std::invalid_argument(what) {}
};

// A partition level would exceed the materialization cap.
struct LevelTooLarge : std::length_error {
    explicit LevelTooLarge(const std::string& what) : std::length_error(what) {}
};

} // namespace rotsum

#endif
