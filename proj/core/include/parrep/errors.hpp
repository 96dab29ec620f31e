#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace parrep
{
    // Malformed text input; carries the 1-based line number when known.
    class FormatError : public std::runtime_error
    {
        std::size_t line_;

    public:
        FormatError(const std::string & message, std::size_t line) :
            std::runtime_error("line " + std::to_string(line) + ": " + message),
            line_(line)
        {
        }

        auto line() const -> std::size_t { return line_; }
    };

    // An exhaustive computation would exceed its configured budget.
    class BudgetExceeded : public std::runtime_error
    {
        long double required_;

    public:
        BudgetExceeded(const std::string & what, long double required, long double budget);

        auto required() const -> long double { return required_; }
    };

    // A certificate step that cannot be applied.
    class CertificateError : public std::runtime_error
    {
        std::optional<std::size_t> step_;

    public:
        explicit CertificateError(const std::string & message, std::optional<std::size_t> step = std::nullopt) :
            std::runtime_error(step ? "step " + std::to_string(*step) + ": " + message : message),
            step_(step)
        {
        }

        auto step() const -> std::optional<std::size_t> { return step_; }
    };

    // A collapse mapping that sends some edge outside the kept section.
    class HomomorphismViolation : public CertificateError
    {
    public:
        using CertificateError::CertificateError;
    };
}
