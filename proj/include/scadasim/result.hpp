#pragma once

#include <optional>
#include <utility>

#include "scadasim/errors.hpp"

namespace scadasim {

// Minimal ok-or-error carrier for the codec paths, which must never throw
// on arbitrary input (fuzz totality).
template <typename T, typename E>
class Result {
 public:
    static Result success(T value) {
        Result r;
        r.value_ = std::move(value);
        return r;
    }
    static Result failure(E error) {
        Result r;
        r.error_ = error;
        return r;
    }

    bool ok() const { return value_.has_value(); }
    explicit operator bool() const { return ok(); }

    const T& value() const {
        if (!value_) throw ContractViolation("Result: value() on failure");
        return *value_;
    }
    T& value() {
        if (!value_) throw ContractViolation("Result: value() on failure");
        return *value_;
    }
    E error() const {
        if (value_) throw ContractViolation("Result: error() on success");
        return error_;
    }

 private:
    Result() = default;
    std::optional<T> value_;
    E error_{};
};

}  // namespace scadasim
