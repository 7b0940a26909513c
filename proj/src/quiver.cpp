#include "exactlift/quiver.hpp"

#include <functional>
#include <numeric>
#include <set>

#include "exactlift/error.hpp"

namespace xl {

Quiver::Quiver(std::vector<std::string> vertices, std::vector<Arrow> arrows)
    : vertices_(std::move(vertices)), arrows_(std::move(arrows)) {
    std::set<std::string> seen;
    for (const auto& v : vertices_)
        if (!seen.insert(v).second) throw Error(ErrorCode::InvalidArgument, "duplicate vertex '" + v + "'");
    seen.clear();
    for (const auto& a : arrows_) {
        if (!seen.insert(a.id).second) throw Error(ErrorCode::InvalidArgument, "duplicate arrow id '" + a.id + "'");
        if (a.tail < 0 || a.tail >= num_vertices() || a.head < 0 || a.head >= num_vertices())
            throw Error(ErrorCode::UnknownVertex, "arrow '" + a.id + "' has an endpoint outside the vertex list");
    }
}

Quiver Quiver::from_names(std::vector<std::string> vertices,
                          const std::vector<std::tuple<std::string, std::string, std::string>>& arrows) {
    Quiver tmp(vertices, {});
    std::vector<Arrow> as;
    for (const auto& [id, from, to] : arrows) as.push_back({id, tmp.vertex_index(from), tmp.vertex_index(to)});
    return Quiver(std::move(vertices), std::move(as));
}

Quiver Quiver::kronecker(int n) {
    std::vector<Arrow> as;
    for (int i = 0; i < n; ++i) as.push_back({"a" + std::to_string(i + 1), 0, 1});
    return Quiver({"1", "2"}, as);
}

Quiver Quiver::loops(int n) {
    std::vector<Arrow> as;
    for (int i = 0; i < n; ++i) as.push_back({"a" + std::to_string(i + 1), 0, 0});
    return Quiver({"1"}, as);
}

Quiver Quiver::linear(int n) {
    std::vector<std::string> vs;
    std::vector<Arrow> as;
    for (int i = 0; i < n; ++i) vs.push_back(std::to_string(i + 1));
    for (int i = 0; i + 1 < n; ++i) as.push_back({"a" + std::to_string(i + 1), i, i + 1});
    return Quiver(vs, as);
}

std::optional<Quiver> Quiver::named(const std::string& name) {
    auto suffix = [&](const std::string& prefix) -> std::optional<int> {
        if (name.rfind(prefix, 0) != 0 || name.size() == prefix.size()) return std::nullopt;
        std::string rest = name.substr(prefix.size());
        if (rest.find_first_not_of("0123456789") != std::string::npos || rest.size() > 3) return std::nullopt;
        return std::stoi(rest);
    };
    if (name == "threeloop") return loops(3);
    if (name == "jordan") return loops(1);
    if (auto n = suffix("kronecker")) return kronecker(*n);
    if (auto n = suffix("loops")) return loops(*n);
    if (auto n = suffix("a"); n && *n >= 1) return linear(*n);
    return std::nullopt;
}

int Quiver::vertex_index(const std::string& name) const {
    for (int i = 0; i < num_vertices(); ++i)
        if (vertices_[i] == name) return i;
    throw Error(ErrorCode::UnknownVertex, "unknown vertex '" + name + "'");
}

int Quiver::arrow_index(const std::string& id) const {
    for (int i = 0; i < num_arrows(); ++i)
        if (arrows_[i].id == id) return i;
    throw Error(ErrorCode::InvalidArgument, "unknown arrow '" + id + "'");
}

bool Quiver::is_acyclic() const {
    // Kahn's algorithm
    std::vector<int> indeg(num_vertices(), 0);
    for (const auto& a : arrows_) indeg[a.head]++;
    std::vector<int> ready;
    for (int i = 0; i < num_vertices(); ++i)
        if (!indeg[i]) ready.push_back(i);
    int done = 0;
    while (!ready.empty()) {
        int v = ready.back();
        ready.pop_back();
        ++done;
        for (const auto& a : arrows_)
            if (a.tail == v && --indeg[a.head] == 0) ready.push_back(a.head);
    }
    return done == num_vertices();
}

bool Quiver::operator==(const Quiver& o) const {
    if (vertices_ != o.vertices_ || arrows_.size() != o.arrows_.size()) return false;
    for (size_t i = 0; i < arrows_.size(); ++i)
        if (arrows_[i].id != o.arrows_[i].id || arrows_[i].tail != o.arrows_[i].tail ||
            arrows_[i].head != o.arrows_[i].head)
            return false;
    return true;
}

std::string Quiver::to_string() const {
    std::string s = "vertices=[";
    for (size_t i = 0; i < vertices_.size(); ++i) s += (i ? "," : "") + vertices_[i];
    s += "] arrows=[";
    for (size_t i = 0; i < arrows_.size(); ++i)
        s += (i ? "," : "") + arrows_[i].id + ":" + vertices_[arrows_[i].tail] + "->" + vertices_[arrows_[i].head];
    return s + "]";
}

namespace {

void check_shape(const Quiver& q, const std::vector<long>& a) {
    if (int(a.size()) != q.num_vertices())
        throw Error(ErrorCode::ShapeMismatch, "vector of length " + std::to_string(a.size()) + " for a quiver with " +
                                                  std::to_string(q.num_vertices()) + " vertices");
}

}  // namespace

long dot(const std::vector<long>& a, const std::vector<long>& b) {
    if (a.size() != b.size()) throw Error(ErrorCode::ShapeMismatch, "dot product of unequal lengths");
    long s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

long euler_form(const Quiver& q, const DimVector& a, const DimVector& b) {
    check_shape(q, a);
    check_shape(q, b);
    long s = dot(a, b);
    for (const auto& ar : q.arrows()) s -= a[ar.tail] * b[ar.head];
    return s;
}

long symmetric_form(const Quiver& q, const DimVector& a, const DimVector& b) {
    return euler_form(q, a, b) + euler_form(q, b, a);
}

bool in_fundamental_region(const Quiver& q, const DimVector& a) {
    check_shape(q, a);
    bool nonzero = false;
    for (long x : a) {
        if (x < 0) throw Error(ErrorCode::InvalidArgument, "dimension vectors are nonnegative");
        nonzero |= x != 0;
    }
    if (!nonzero) throw Error(ErrorCode::ZeroVector, "fundamental region test of the zero vector");
    int n = q.num_vertices();
    for (int i = 0; i < n; ++i) {
        DimVector e(n, 0);
        e[i] = 1;
        if (symmetric_form(q, e, a) > 0) return false;
    }
    // support connected in the underlying undirected graph
    std::vector<int> comp(n, -1);
    int start = -1;
    for (int i = 0; i < n && start < 0; ++i)
        if (a[i]) start = i;
    std::vector<int> stack{start};
    comp[start] = 0;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (const auto& ar : q.arrows()) {
            int w = ar.tail == v ? ar.head : ar.head == v ? ar.tail : -1;
            if (w >= 0 && a[w] && comp[w] < 0) {
                comp[w] = 0;
                stack.push_back(w);
            }
        }
    }
    for (int i = 0; i < n; ++i)
        if (a[i] && comp[i] < 0) return false;
    return true;
}

bool is_indivisible(const DimVector& a) {
    long g = 0;
    for (long x : a) g = std::gcd(g, x);
    return g == 1;
}

std::optional<DimVector> find_indivisible_negative(const Quiver& q, long n, long bound) {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "N must be positive");
    int k = q.num_vertices();
    if (k == 0 || bound < 1) return std::nullopt;
    DimVector cur(k, 0);
    std::optional<DimVector> found;
    // all vectors with entries in [0, bound] summing to `norm`, lexicographically
    std::function<void(int, long)> fill = [&](int i, long rest) {
        if (found) return;
        if (i == k - 1) {
            if (rest > bound) return;
            cur[i] = rest;
            if (is_indivisible(cur) && symmetric_form(q, cur, cur) <= -n && in_fundamental_region(q, cur)) found = cur;
            return;
        }
        for (long x = 0; x <= std::min(bound, rest) && !found; ++x) {
            cur[i] = x;
            fill(i + 1, rest - x);
        }
    };
    for (long norm = 1; norm <= bound * k && !found; ++norm) fill(0, norm);
    return found;
}

std::vector<long> codim_vector(const Quiver& q, const DimVector& a) {
    check_shape(q, a);
    std::vector<long> out = a;
    for (const auto& ar : q.arrows()) out[ar.head] -= a[ar.tail];
    return out;
}

long moduli_dimension(const Quiver& q, const DimVector& a) {
    if (!in_fundamental_region(q, a))
        throw Error(ErrorCode::NotInFundamentalRegion, format_vector(a) + " is not in the fundamental region");
    if (!is_indivisible(a)) throw Error(ErrorCode::DivisibleVector, format_vector(a) + " is divisible");
    return -symmetric_form(q, a, a) / 2 + 1;
}

std::string format_vector(const std::vector<long>& v) {
    std::string s = "(";
    for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s + ")";
}

std::vector<long> parse_vector(const std::string& text) {
    std::vector<long> out;
    std::string t;
    for (char c : text)
        if (c != '(' && c != ')' && c != '[' && c != ']' && c != ' ') t += c;
    size_t pos = 0;
    while (pos <= t.size()) {
        size_t next = t.find(',', pos);
        std::string item = t.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
        if (item.empty() || item.find_first_not_of("-0123456789") != std::string::npos || item == "-")
            throw ParseError("bad integer '" + item + "' in vector '" + text + "'", 1, int(pos) + 1);
        out.push_back(std::stol(item));
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    return out;
}

}  // namespace xl
