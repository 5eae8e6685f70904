#pragma once

#include <stdexcept>
#include <string>

namespace psmatch {

// Base for everything this library throws; the CLI maps each family to a
// distinct exit code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A file could not be opened, read, or written.
class IoError : public Error {
public:
    using Error::Error;
};

// Malformed input file (bad header, unreadable cell, ragged row).
class ParseError : public Error {
public:
    using Error::Error;
};

// A value lies outside its mathematical domain (treatment not in {0,1},
// score not in (0,1), alpha outside (0,1), unknown design id, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// One treatment arm is empty, so nothing can be matched.
class DegenerateArmError : public Error {
public:
    using Error::Error;
};

// An index, match count, or window size is out of range for the data.
class BoundError : public Error {
public:
    using Error::Error;
};

// Containers that must line up (scores vs observations, ...) do not.
class ShapeError : public Error {
public:
    using Error::Error;
};

// The logistic likelihood has no finite maximizer (separated data).
class SeparationError : public Error {
public:
    using Error::Error;
};

// A matrix that must be solved against is numerically singular.
class RankDeficiencyError : public Error {
public:
    using Error::Error;
};

} // namespace psmatch
