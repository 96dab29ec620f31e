#include <parrep/errors.hpp>
#include <parrep/rational.hpp>

#include <sstream>
#include <stdexcept>

namespace parrep
{
    BudgetExceeded::BudgetExceeded(const std::string & what, long double required, long double budget) :
        std::runtime_error([&] {
            std::ostringstream out;
            out << what << ": requires " << required << ", budget is " << budget;
            return out.str();
        }()),
        required_(required)
    {
    }

    auto to_string(const Rational & q) -> std::string
    {
        Rational c = q;
        c.canonicalize();
        return c.get_num().get_str() + "/" + c.get_den().get_str();
    }

    auto parse_rational(const std::string & text) -> Rational
    {
        Rational q;
        if (text.empty() || q.set_str(text, 10) != 0 || q.get_den() == 0)
            throw std::invalid_argument("not a rational: '" + text + "'");
        q.canonicalize();
        return q;
    }

    auto pow(const Rational & base, unsigned long exponent) -> Rational
    {
        Integer num, den;
        mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), exponent);
        mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), exponent);
        Rational result(num, den);
        result.canonicalize();
        return result;
    }

    auto binomial(unsigned long n, unsigned long k) -> Integer
    {
        Integer result;
        mpz_bin_uiui(result.get_mpz_t(), n, k);
        return result;
    }
}
