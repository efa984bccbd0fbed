#ifndef DFBOPO_ERRORS_HPP
#define DFBOPO_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dfbopo
{
// Base for every numerical or domain failure raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error
{
public:
    using Error::Error;
};

// (I - M) has no usable inverse; for cavity loops this means the device is at
// or above its oscillation threshold.
class SingularResolvent : public Error
{
public:
    using Error::Error;
};

class IllConditioned : public Error
{
public:
    using Error::Error;
};

// Raised when a quantity that must be real by Bogoliubov structure is not.
// Always an implementation bug, never physics.
class DeterminantNotReal : public Error
{
public:
    using Error::Error;
};

class NotReal : public Error
{
public:
    using Error::Error;
};

class NoFeedback : public Error
{
public:
    using Error::Error;
};

class NoThresholdInRange : public Error
{
public:
    using Error::Error;
};

} // namespace dfbopo

#endif
