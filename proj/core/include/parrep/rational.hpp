#pragma once

#include <gmpxx.h>

#include <string>

namespace parrep
{
    using Rational = mpq_class;
    using Integer = mpz_class;

    // Always "p/q" in lowest terms, including integers ("1/1").
    auto to_string(const Rational & q) -> std::string;

    auto parse_rational(const std::string & text) -> Rational;

    auto pow(const Rational & base, unsigned long exponent) -> Rational;

    auto binomial(unsigned long n, unsigned long k) -> Integer;
}
