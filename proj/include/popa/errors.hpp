#pragma once

#include <stdexcept>
#include <string>

namespace popa {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error { public: using Error::Error; };
class NonMember         : public Error { public: using Error::Error; };
class ZeroDirection     : public Error { public: using Error::Error; };
class NullDirection     : public Error { public: using Error::Error; };
class NoCase            : public Error { public: using Error::Error; };
class NotCommutative    : public Error { public: using Error::Error; };
class DomainViolation   : public Error { public: using Error::Error; };
class Unvalidated       : public Error { public: using Error::Error; };
class ConstraintViolation : public Error { public: using Error::Error; };
class NotHomomorphic    : public Error { public: using Error::Error; };
class InconsistentIndex : public Error { public: using Error::Error; };
class NotCollinear      : public Error { public: using Error::Error; };
class ZeroImage         : public Error { public: using Error::Error; };
class NotUnitDirection  : public Error { public: using Error::Error; };
class NotInjective      : public Error { public: using Error::Error; };
class NonConvergent     : public Error { public: using Error::Error; };
class BoxOutsideDomain  : public Error { public: using Error::Error; };
class ParseError        : public Error { public: using Error::Error; };

}  // namespace popa
