#pragma once

// Exact scalars: Q, F_p and rational function fields k(x1..xd) over Q or F_p.
// Field descriptors are interned, so a Field is a cheap handle compared by
// identity.

#include <string>
#include <vector>

#include <gmpxx.h>

#include "exactlift/poly.hpp"

namespace xl {

enum class FieldKind { rationals, prime_field, function_field };

struct FieldDescriptor {
    FieldKind kind;
    unsigned long p;  // characteristic, 0 for Q
    std::vector<std::string> vars;
    const FieldDescriptor* base;  // set for function fields only
};

class FieldElement;

class Field {
public:
    Field();  // Q
    static Field rationals();
    static Field prime(unsigned long p);
    static Field function_field(Field base, std::vector<std::string> vars);
    // "QQ", "GF(101)", "QQ(x,y,z)", "GF(7)(s,t)"
    static Field parse(const std::string& text);

    FieldKind kind() const { return d_->kind; }
    unsigned long characteristic() const { return d_->p; }
    bool is_function_field() const { return d_->kind == FieldKind::function_field; }
    bool is_finite() const { return d_->kind == FieldKind::prime_field; }
    int nvars() const { return int(d_->vars.size()); }
    const std::vector<std::string>& vars() const { return d_->vars; }
    Field base() const;
    Coeffs coeffs() const { return Coeffs{d_->p}; }
    std::string to_string() const;

    FieldElement zero() const;
    FieldElement one() const;
    FieldElement from_int(long v) const;
    FieldElement from_rational(const mpq_class& q) const;
    FieldElement variable(int i) const;
    FieldElement variable(const std::string& name) const;
    // Scalar text syntax: integers, a/b, polynomial fractions.
    FieldElement parse_element(const std::string& text) const;

    bool operator==(const Field& o) const { return d_ == o.d_; }
    const FieldDescriptor* descriptor() const { return d_; }

private:
    explicit Field(const FieldDescriptor* d) : d_(d) {}
    const FieldDescriptor* d_;
};

class FieldElement {
public:
    FieldElement() = default;  // 0 in Q

    Field field() const { return f_; }
    bool is_zero() const;
    bool is_one() const;

    // Q / F_p payload
    const mpq_class& value() const { return q_; }
    // function-field payload; denominator has deglex leading coefficient 1
    const Poly& numerator() const { return num_; }
    const Poly& denominator() const { return den_; }

    FieldElement inv() const;
    FieldElement operator-() const;
    FieldElement& operator+=(const FieldElement& o);
    FieldElement& operator-=(const FieldElement& o);
    FieldElement& operator*=(const FieldElement& o);
    FieldElement& operator/=(const FieldElement& o);

    bool operator==(const FieldElement& o) const;

    std::string to_string() const;

    // Specialize x_i -> point[i]. The point lives in the base field, or in F_p
    // when the base is Q (coefficients are reduced mod p).
    FieldElement evaluate(const std::vector<FieldElement>& point) const;

    static FieldElement make_scalar(Field f, mpq_class q);
    static FieldElement canonicalize(Field f, Poly num, Poly den);

private:
    Field f_;
    mpq_class q_;
    Poly num_, den_;
};

inline FieldElement operator+(FieldElement a, const FieldElement& b) { return a += b; }
inline FieldElement operator-(FieldElement a, const FieldElement& b) { return a -= b; }
inline FieldElement operator*(FieldElement a, const FieldElement& b) { return a *= b; }
inline FieldElement operator/(FieldElement a, const FieldElement& b) { return a /= b; }

}  // namespace xl
