#pragma once

#include <stdexcept>
#include <string>

namespace plreg {

// Parameter or argument outside its mathematical domain.
class domain_error : public std::invalid_argument {
public:
    explicit domain_error(const std::string& what) : std::invalid_argument(what) {}
};

// Interface misuse: unknown column, non-nested models, mismatched files.
class usage_error : public std::invalid_argument {
public:
    explicit usage_error(const std::string& what) : std::invalid_argument(what) {}
};

// Numerical breakdown: singular information matrix, failed refits, ...
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace plreg
