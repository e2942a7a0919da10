#pragma once

#include <stdexcept>
#include <string>

namespace cubecorr {

// invalid construction parameters (bad n, malformed tables, bad flags)
class config_error : public std::invalid_argument {
public:
    explicit config_error(const std::string& what) : std::invalid_argument(what) {}
};

// a structural identity that must hold by construction failed; the message
// names the identity that broke
class integrity_error : public std::logic_error {
public:
    explicit integrity_error(const std::string& what) : std::logic_error(what) {}
};

// request exceeds a documented size cap and is refused rather than attempted
class cap_error : public std::length_error {
public:
    explicit cap_error(const std::string& what) : std::length_error(what) {}
};

}
