#pragma once

#include <stdexcept>
#include <string>

namespace jllab {

// Base of every error the library throws on bad input or failed checks.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input outside an operation's domain (zero divisor, non-prime-power q, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// A homomorphism whose generator images do not respect the source relations.
class IllDefinedHom : public Error {
public:
    using Error::Error;
};

class InfiniteOrder : public Error {
public:
    using Error::Error;
};

class DisconnectedGraph : public Error {
public:
    using Error::Error;
};

// An internal cross-check between two independent computations disagreed.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

inline void require(bool ok, const std::string& what) {
    if (!ok) throw DomainError(what);
}

inline void ensure(bool ok, const std::string& what) {
    if (!ok) throw ConsistencyError(what);
}

}  // namespace jllab
