#include "exactlift/field.hpp"

#include <cctype>
#include <deque>
#include <mutex>
#include <set>

#include "exactlift/error.hpp"

namespace xl {

namespace {

std::mutex registry_mutex;
std::deque<FieldDescriptor>& registry() {
    static std::deque<FieldDescriptor> r;
    return r;
}

const FieldDescriptor* intern(FieldKind kind, unsigned long p, std::vector<std::string> vars,
                              const FieldDescriptor* base) {
    std::lock_guard lock(registry_mutex);
    for (const auto& d : registry())
        if (d.kind == kind && d.p == p && d.vars == vars && d.base == base) return &d;
    registry().push_back({kind, p, std::move(vars), base});
    return &registry().back();
}

bool valid_identifier(const std::string& s) {
    if (s.empty() || !(std::isalpha((unsigned char)s[0]) || s[0] == '_')) return false;
    for (char c : s)
        if (!(std::isalnum((unsigned char)c) || c == '_')) return false;
    return true;
}

}  // namespace

Field::Field() {
    static const FieldDescriptor* q = intern(FieldKind::rationals, 0, {}, nullptr);
    d_ = q;
}

Field Field::rationals() { return Field(); }

Field Field::prime(unsigned long p) {
    mpz_class z(p);
    if (p < 2 || mpz_probab_prime_p(z.get_mpz_t(), 30) == 0)
        throw Error(ErrorCode::InvalidArgument, std::to_string(p) + " is not prime");
    return Field(intern(FieldKind::prime_field, p, {}, nullptr));
}

Field Field::function_field(Field base, std::vector<std::string> vars) {
    if (base.is_function_field()) throw Error(ErrorCode::InvalidArgument, "nested function fields are not supported");
    if (vars.empty()) throw Error(ErrorCode::InvalidArgument, "function field needs at least one variable");
    if (int(vars.size()) > kMaxVars)
        throw Error(ErrorCode::InvalidArgument, "at most " + std::to_string(kMaxVars) + " variables");
    std::set<std::string> seen;
    for (const auto& v : vars) {
        if (!valid_identifier(v)) throw Error(ErrorCode::InvalidArgument, "bad variable name '" + v + "'");
        if (!seen.insert(v).second) throw Error(ErrorCode::InvalidArgument, "duplicate variable '" + v + "'");
    }
    return Field(intern(FieldKind::function_field, base.characteristic(), std::move(vars), base.d_));
}

Field Field::parse(const std::string& raw) {
    std::string t;
    for (char c : raw)
        if (!std::isspace((unsigned char)c)) t += c;
    size_t pos = 0;
    Field base;
    if (t.rfind("QQ", 0) == 0) {
        pos = 2;
    } else if (t.rfind("GF(", 0) == 0) {
        size_t close = t.find(')');
        if (close == std::string::npos) throw ParseError("unterminated GF(", 1, int(t.size()) + 1);
        std::string num = t.substr(3, close - 3);
        if (num.empty() || num.find_first_not_of("0123456789") != std::string::npos)
            throw ParseError("bad characteristic '" + num + "'", 1, 4);
        base = prime(std::stoul(num));
        pos = close + 1;
    } else {
        throw ParseError("field must start with QQ or GF(p)", 1, 1);
    }
    if (pos == t.size()) return base;
    if (t[pos] != '(' || t.back() != ')') throw ParseError("expected (variables)", 1, int(pos) + 1);
    std::vector<std::string> vars;
    std::string cur;
    for (size_t i = pos + 1; i + 1 < t.size(); ++i) {
        if (t[i] == ',') {
            vars.push_back(cur);
            cur.clear();
        } else {
            cur += t[i];
        }
    }
    vars.push_back(cur);
    return function_field(base, vars);
}

Field Field::base() const { return d_->base ? Field(d_->base) : *this; }

std::string Field::to_string() const {
    std::string s = d_->p == 0 ? "QQ" : "GF(" + std::to_string(d_->p) + ")";
    if (!is_function_field()) return s;
    s += "(";
    for (size_t i = 0; i < d_->vars.size(); ++i) s += (i ? "," : "") + d_->vars[i];
    return s + ")";
}

FieldElement Field::zero() const { return from_int(0); }
FieldElement Field::one() const { return from_int(1); }
FieldElement Field::from_int(long v) const { return from_rational(mpq_class(v)); }

FieldElement Field::from_rational(const mpq_class& q) const {
    if (is_function_field()) {
        Coeffs K = coeffs();
        mpq_class c = q;
        K.reduce(c);
        return FieldElement::canonicalize(*this, Poly::constant(c), Poly::constant(1));
    }
    return FieldElement::make_scalar(*this, q);
}

FieldElement Field::variable(int i) const {
    if (!is_function_field() || i < 0 || i >= nvars())
        throw Error(ErrorCode::InvalidArgument, "no variable " + std::to_string(i) + " in " + to_string());
    return FieldElement::canonicalize(*this, Poly::variable(i), Poly::constant(1));
}

FieldElement Field::variable(const std::string& name) const {
    for (int i = 0; i < nvars(); ++i)
        if (d_->vars[i] == name) return variable(i);
    throw Error(ErrorCode::InvalidArgument, "no variable '" + name + "' in " + to_string());
}

// ---- elements ----

FieldElement FieldElement::make_scalar(Field f, mpq_class q) {
    f.coeffs().reduce(q);
    FieldElement e;
    e.f_ = f;
    e.q_ = std::move(q);
    return e;
}

FieldElement FieldElement::canonicalize(Field f, Poly num, Poly den) {
    if (den.is_zero()) throw Error(ErrorCode::ZeroDenominator, "zero denominator");
    FieldElement e;
    e.f_ = f;
    Coeffs K = f.coeffs();
    if (num.is_zero()) {
        e.den_ = Poly::constant(1);
        return e;
    }
    Poly g = gcd(num, den, K);
    if (!g.is_one()) {
        num = exact_div(num, g, K);
        den = exact_div(den, g, K);
    }
    mpq_class lc = den.lead().c;
    if (lc != 1) {
        mpq_class il = K.inv(lc);
        num = scale(num, il, K);
        den = scale(den, il, K);
    }
    e.num_ = std::move(num);
    e.den_ = std::move(den);
    return e;
}

bool FieldElement::is_zero() const { return f_.is_function_field() ? num_.is_zero() : q_ == 0; }

bool FieldElement::is_one() const { return f_.is_function_field() ? num_.is_one() && den_.is_one() : q_ == 1; }

static void check_same(const FieldElement& a, const FieldElement& b) {
    if (!(a.field() == b.field()))
        throw Error(ErrorCode::DescriptorMismatch, a.field().to_string() + " vs " + b.field().to_string());
}

FieldElement FieldElement::inv() const {
    if (is_zero()) throw Error(ErrorCode::DivisionByZero, "inverse of zero");
    if (!f_.is_function_field()) return make_scalar(f_, f_.coeffs().inv(q_));
    return canonicalize(f_, den_, num_);
}

FieldElement FieldElement::operator-() const {
    FieldElement r = *this;
    Coeffs K = f_.coeffs();
    if (f_.is_function_field())
        r.num_ = neg(num_, K);
    else
        r.q_ = K.neg(q_);
    return r;
}

FieldElement& FieldElement::operator+=(const FieldElement& o) {
    check_same(*this, o);
    Coeffs K = f_.coeffs();
    if (!f_.is_function_field()) {
        q_ = K.add(q_, o.q_);
        return *this;
    }
    if (o.is_zero()) return *this;
    if (is_zero()) return *this = o;
    if (den_ == o.den_) {
        *this = canonicalize(f_, add(num_, o.num_, K), den_);
        return *this;
    }
    Poly g = gcd(den_, o.den_, K);
    Poly b1 = exact_div(den_, g, K), d1 = exact_div(o.den_, g, K);
    Poly num = add(mul(num_, d1, K), mul(o.num_, b1, K), K);
    *this = canonicalize(f_, std::move(num), mul(b1, o.den_, K));
    return *this;
}

FieldElement& FieldElement::operator-=(const FieldElement& o) { return *this += -o; }

FieldElement& FieldElement::operator*=(const FieldElement& o) {
    check_same(*this, o);
    Coeffs K = f_.coeffs();
    if (!f_.is_function_field()) {
        q_ = K.mul(q_, o.q_);
        return *this;
    }
    if (is_zero() || o.is_zero()) return *this = f_.zero();
    Poly g1 = gcd(num_, o.den_, K), g2 = gcd(o.num_, den_, K);
    Poly num = mul(exact_div(num_, g1, K), exact_div(o.num_, g2, K), K);
    Poly den = mul(exact_div(den_, g2, K), exact_div(o.den_, g1, K), K);
    mpq_class il = K.inv(den.lead().c);
    num_ = scale(num, il, K);
    den_ = scale(den, il, K);
    return *this;
}

FieldElement& FieldElement::operator/=(const FieldElement& o) {
    check_same(*this, o);
    if (o.is_zero()) throw Error(ErrorCode::DivisionByZero, "division by zero");
    return *this *= o.inv();
}

bool FieldElement::operator==(const FieldElement& o) const {
    if (!(f_ == o.f_)) return false;
    if (!f_.is_function_field()) return q_ == o.q_;
    return num_ == o.num_ && den_ == o.den_;
}

std::string FieldElement::to_string() const {
    if (!f_.is_function_field()) return q_.get_str();
    const auto& names = f_.vars();
    std::string n = num_.to_string(names);
    if (den_.is_one()) return n;
    std::string d = den_.to_string(names);
    if (n.find(' ') != std::string::npos) n = "(" + n + ")";
    if (d.find_first_of(" */") != std::string::npos) d = "(" + d + ")";
    return n + "/" + d;
}

FieldElement FieldElement::evaluate(const std::vector<FieldElement>& point) const {
    if (!f_.is_function_field()) throw Error(ErrorCode::InvalidArgument, "evaluate needs a function field element");
    if (int(point.size()) != f_.nvars())
        throw Error(ErrorCode::DimensionMismatch, "point has " + std::to_string(point.size()) + " coordinates, expected " +
                                                      std::to_string(f_.nvars()));
    Field target = point.empty() ? f_.base() : point[0].field();
    bool reduction = f_.characteristic() == 0 && target.is_finite();
    if (!(target == f_.base()) && !reduction)
        throw Error(ErrorCode::DescriptorMismatch, "cannot evaluate " + f_.to_string() + " at a point of " +
                                                       target.to_string());
    std::vector<mpq_class> pt;
    for (const auto& x : point) {
        check_same(x, point[0]);
        pt.push_back(x.value());
    }
    Coeffs K = target.coeffs();
    auto eval = [&](const Poly& p) {
        if (!reduction) return xl::evaluate(p, pt, K);
        std::vector<Term> ts = p.terms();
        for (auto& t : ts) K.reduce(t.c);
        return xl::evaluate(Poly::from_terms(std::move(ts), K), pt, K);
    };
    mpq_class d = eval(den_);
    if (d == 0) throw Error(ErrorCode::PoleAtPoint, "denominator " + den_.to_string(f_.vars()) + " vanishes");
    mpq_class n = eval(num_);
    return make_scalar(target, K.mul(n, K.inv(d)));
}

// ---- text syntax ----

namespace {

class ScalarParser {
public:
    ScalarParser(Field f, const std::string& s) : f_(f), s_(s) {}

    FieldElement run() {
        FieldElement v = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg + " in '" + s_ + "'", 1, int(pos_) + 1); }

    void skip() {
        while (pos_ < s_.size() && std::isspace((unsigned char)s_[pos_])) ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    FieldElement expr() {
        FieldElement v = term();
        for (;;) {
            if (eat('+'))
                v += term();
            else if (eat('-'))
                v -= term();
            else
                return v;
        }
    }

    FieldElement term() {
        FieldElement v = unary();
        for (;;) {
            if (eat('*')) {
                v *= unary();
            } else if (eat('/')) {
                size_t at = pos_;
                FieldElement d = unary();
                if (d.is_zero()) {
                    pos_ = at;
                    throw Error(ErrorCode::DivisionByZero, "division by zero in '" + s_ + "'");
                }
                v /= d;
            } else {
                return v;
            }
        }
    }

    FieldElement unary() {
        if (eat('-')) return -unary();
        if (eat('+')) return unary();
        return power();
    }

    FieldElement power() {
        FieldElement base = atom();
        if (!eat('^')) return base;
        skip();
        size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit((unsigned char)s_[pos_])) ++pos_;
        if (start == pos_) fail("expected exponent");
        unsigned long n = std::stoul(s_.substr(start, pos_ - start));
        FieldElement r = f_.one();
        for (unsigned long i = 0; i < n; ++i) r *= base;
        return r;
    }

    FieldElement atom() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            FieldElement v = expr();
            if (!eat(')')) fail("expected ')'");
            return v;
        }
        if (std::isdigit((unsigned char)c)) {
            size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit((unsigned char)s_[pos_])) ++pos_;
            return f_.from_rational(mpq_class(mpz_class(s_.substr(start, pos_ - start))));
        }
        if (std::isalpha((unsigned char)c) || c == '_') {
            size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum((unsigned char)s_[pos_]) || s_[pos_] == '_')) ++pos_;
            std::string name = s_.substr(start, pos_ - start);
            for (int i = 0; i < f_.nvars(); ++i)
                if (f_.vars()[i] == name) return f_.variable(i);
            pos_ = start;
            fail("unknown variable '" + name + "'");
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    Field f_;
    const std::string& s_;
    size_t pos_ = 0;
};

}  // namespace

FieldElement Field::parse_element(const std::string& text) const { return ScalarParser(*this, text).run(); }

}  // namespace xl
