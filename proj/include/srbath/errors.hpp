#pragma once

#include <stdexcept>
#include <string>

namespace srbath {

// Base for everything this library throws on purpose.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Precondition / argument violations (bad temperature, bad fraction, ...).
class domain_error : public error {
public:
    using error::error;
};

// Shape mismatches between operators, grids and series.
class dimension_error : public error {
public:
    using error::error;
};

// File ingestion problems, with the failure category preserved.
class parse_error : public error {
public:
    enum class kind { missing_file, bad_value, too_short, bad_format };

    parse_error(kind k, const std::string& msg) : error(msg), kind_(k) {}
    kind which() const noexcept { return kind_; }

private:
    kind kind_;
};

// Non-finite values or diverging iterations detected mid-computation.
class numeric_error : public error {
public:
    using error::error;
};

}  // namespace srbath
