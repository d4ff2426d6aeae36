#pragma once

#include <stdexcept>
#include <string>

namespace hbundle {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An abscissa or bound lies outside the domain of the function it is used with.
class DomainError : public Error {
 public:
  using Error::Error;
};

class EmptyInput : public Error {
 public:
  using Error::Error;
};

/// Two functions were compared that do not share the same support [a, S].
class DomainMismatch : public Error {
 public:
  using Error::Error;
};

/// Prefix cut outside the open interval ]a, S[.
class BadPrefix : public Error {
 public:
  using Error::Error;
};

/// Breakpoints do not describe a non-negative, non-increasing function.
class InvalidFunction : public Error {
 public:
  using Error::Error;
};

class WouldViolateInvariants : public Error {
 public:
  using Error::Error;
};

class OriginMismatch : public Error {
 public:
  using Error::Error;
};

class NonPositiveTheta : public Error {
 public:
  using Error::Error;
};

/// The θ-inverse of A(x, ·) does not exist at this abscissa.
class SingularAbscissa : public Error {
 public:
  using Error::Error;
};

/// T(f)(x) = 0, which would give the excluded value θ = 0.
class ZeroValue : public Error {
 public:
  using Error::Error;
};

class ZeroFunction : public Error {
 public:
  using Error::Error;
};

/// The bundle equation has no solution for this θ.
class NoRootError : public Error {
 public:
  using Error::Error;
};

/// The bundle equation has more than one solution for this θ.
class NonUniqueError : public Error {
 public:
  using Error::Error;
};

}  // namespace hbundle
