#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <vector>

namespace smcount {

using BigInt = boost::multiprecision::cpp_int;

// Polynomial over Z in the model-size variable q. Coefficients are stored in
// ascending degree with no trailing zeros; the empty vector is the zero
// polynomial. All arithmetic is exact.
class IntPoly {
  public:
    IntPoly() = default;
    explicit IntPoly(std::vector<BigInt> ascending_coeffs);

    static IntPoly constant(BigInt c);
    static IntPoly monomial(BigInt c, std::size_t degree);

    bool is_zero() const { return coeffs_.empty(); }
    // -1 for the zero polynomial.
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    BigInt leading_coefficient() const { return coeffs_.empty() ? BigInt(0) : coeffs_.back(); }
    const std::vector<BigInt>& coefficients() const { return coeffs_; }
    BigInt coefficient(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : BigInt(0); }

    BigInt eval(const BigInt& q) const;

    // Display form, descending degree: "q^3 - 3q^2 + 2q", "0" for zero.
    std::string to_string() const;

    friend IntPoly operator+(const IntPoly& a, const IntPoly& b);
    friend IntPoly operator-(const IntPoly& a, const IntPoly& b);
    friend IntPoly operator*(const IntPoly& a, const IntPoly& b);
    friend IntPoly operator*(const BigInt& c, const IntPoly& a);
    bool operator==(const IntPoly&) const = default;

  private:
    std::vector<BigInt> coeffs_;
    void trim();
};

}  // namespace smcount
