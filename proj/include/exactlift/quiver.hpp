#pragma once

// Finite quivers and their dimension-vector combinatorics.

#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace xl {

struct Arrow {
    std::string id;
    int tail;
    int head;
};

class Quiver {
public:
    Quiver() = default;
    Quiver(std::vector<std::string> vertices, std::vector<Arrow> arrows);
    // arrows given by vertex names
    static Quiver from_names(std::vector<std::string> vertices,
                             const std::vector<std::tuple<std::string, std::string, std::string>>& arrows);

    // kronecker<n>, loops<n> (one vertex), threeloop, jordan, a<n> (linear
    // A_n, arrows i -> i+1)
    static std::optional<Quiver> named(const std::string& name);
    static Quiver kronecker(int n);
    static Quiver loops(int n);
    static Quiver linear(int n);

    int num_vertices() const { return int(vertices_.size()); }
    int num_arrows() const { return int(arrows_.size()); }
    const std::vector<std::string>& vertices() const { return vertices_; }
    const std::vector<Arrow>& arrows() const { return arrows_; }
    const Arrow& arrow(int a) const { return arrows_[a]; }
    int vertex_index(const std::string& name) const;  // throws UnknownVertex
    int arrow_index(const std::string& id) const;
    bool is_acyclic() const;
    bool operator==(const Quiver& o) const;
    std::string to_string() const;

private:
    std::vector<std::string> vertices_;
    std::vector<Arrow> arrows_;
};

using DimVector = std::vector<long>;
using Weight = std::vector<long>;

long euler_form(const Quiver& q, const DimVector& a, const DimVector& b);
long symmetric_form(const Quiver& q, const DimVector& a, const DimVector& b);
bool in_fundamental_region(const Quiver& q, const DimVector& a);
bool is_indivisible(const DimVector& a);
// Smallest (by l1-norm, then lexicographically) indivisible a in F(Q) with
// (a,a) <= -n and all entries <= bound.
std::optional<DimVector> find_indivisible_negative(const Quiver& q, long n, long bound);
std::vector<long> codim_vector(const Quiver& q, const DimVector& a);
long moduli_dimension(const Quiver& q, const DimVector& a);
long dot(const std::vector<long>& a, const std::vector<long>& b);

std::string format_vector(const std::vector<long>& v);
// "1,1" or "(1, 1)"
std::vector<long> parse_vector(const std::string& text);

}  // namespace xl
