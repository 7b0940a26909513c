// exactlift: command-line front end.
//
// Exit codes: 0 all verifications passed, 1 parse or validation error,
// 2 a correct negative answer (obstructed, condition fails, nothing found),
// 3 a verification failed.

#include <cstdio>
#include <functional>
#include <iostream>
#include <optional>

#include "CLI11.hpp"

#include "exactlift/ainfty.hpp"
#include "exactlift/error.hpp"
#include "exactlift/examples.hpp"
#include "exactlift/lifting.hpp"
#include "exactlift/quiver.hpp"
#include "exactlift/rep.hpp"
#include "json_input.hpp"
#include "report.hpp"
#include "suite.hpp"

using namespace xl;
using cli::json;
using cli::Report;

namespace {

struct Globals {
    std::uint64_t seed = 0;
    std::string format = "report";
    bool timing = false;
    std::string fault;
};

json to_json(const FieldElement& x) { return x.to_string(); }

json to_json(const Vector& v) {
    json a = json::array();
    for (const auto& x : v) a.push_back(x.to_string());
    return a;
}

json to_json(const Matrix& m) {
    json a = json::array();
    for (size_t r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c).to_string());
        a.push_back(row);
    }
    return a;
}

json cohomology_json(const CohomologyReport& r) {
    json o{{"n", r.n}, {"rank", r.rank}, {"cochain_dim", r.cochain_dim}, {"cocycle_dim", r.cocycle_dim},
           {"coboundary_dim", r.coboundary_dim}};
    if (r.j) o["j"] = *r.j;
    if (!r.rank_by_degree.empty()) {
        json by = json::object();
        for (const auto& [j, k] : r.rank_by_degree) by[std::to_string(j)] = k;
        o["rank_by_degree"] = by;
    }
    return o;
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// a builtin name or a .json file, fed through the positional loaders
cli::Node argument_node(const std::string& text, const std::string& what) {
    if (ends_with(text, ".json")) return cli::Node::root(cli::Document::load(text));
    return cli::Node::root(cli::Document::parse(json(text).dump(), what));
}

DimVector vector_arg(const Quiver& q, const std::string& text) {
    DimVector v = parse_vector(text);
    if (v.size() != size_t(q.num_vertices()))
        throw Error(ErrorCode::DimensionMismatch, "vector " + text + " has " + std::to_string(v.size()) +
                                                      " entries, the quiver has " + std::to_string(q.num_vertices()) +
                                                      " vertices");
    return v;
}

long euler_by_hand(const Quiver& q, const DimVector& a, const DimVector& b) {
    long s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    for (const auto& ar : q.arrows()) s -= a[size_t(ar.tail)] * b[size_t(ar.head)];
    return s;
}

DimVector unit_dim(size_t n, size_t i) {
    DimVector e(n, 0);
    e[i] = 1;
    return e;
}

json class_json(const ObstructionClass& o) {
    json sup = json::array();
    for (const auto& s : o.support) sup.push_back(s);
    return {{"arity", o.arity},
            {"hochschild_degree", o.hochschild_degree},
            {"internal_degree", o.internal_degree},
            {"closed", o.closed},
            {"vanishing", o.vanishing},
            {"cochain_dim", o.cochain_dim},
            {"coboundary_rank", o.coboundary_rank},
            {"augmented_rank", o.augmented_rank},
            {"group_rank", o.group_rank},
            {"support", sup}};
}

void obstruction_checks(Report& r, const ObstructionClass& o) {
    r.check("obstruction class is closed", o.closed);
    r.check("obstruction class is not a coboundary (rank certificate)", o.augmented_rank == o.coboundary_rank + 1,
            {{"coboundary_rank", o.coboundary_rank}, {"augmented_rank", o.augmented_rank}});
}

void lift_result(Report& r, const LiftResult& res, int target, const std::function<bool(int)>& residual_zero) {
    r.result("success", res.success);
    r.result("verified_to", res.verified_to);
    json steps = json::array();
    for (const auto& s : res.steps)
        steps.push_back({{"arity", s.arity}, {"defect_zero", s.defect_zero}, {"adjusted", s.adjusted},
                         {"unknowns", s.unknowns}, {"equations", s.equations}});
    r.result("steps", steps);
    r.check("residual vanishes to arity " + std::to_string(res.verified_to), residual_zero(res.verified_to));
    if (res.obstruction) {
        r.result("obstruction", class_json(*res.obstruction));
        obstruction_checks(r, *res.obstruction);
        r.verdict("obstructed at arity " + std::to_string(res.obstruction->arity) + ", verified to arity " +
                      std::to_string(res.verified_to),
                  true);
    } else {
        r.verdict("lifts, verified to arity " + std::to_string(res.verified_to), false);
        r.check("reached the requested arity", res.verified_to == target);
    }
}

std::optional<AlgebraMorphismFixture> algebra_fixture(const std::string& name) {
    Field k = Field::rationals();
    if (name == "F1") return fixture_f1(k);
    if (name == "F2") return fixture_f2(k, 1);
    if (name == "F2-") return fixture_f2(k, -1);
    if (name == "matrix") return fixture_matrix(k);
    return std::nullopt;
}

std::optional<ModuleFixture> module_fixture(const std::string& name) {
    Field k = Field::rationals();
    if (name == "F3") return fixture_f3(k);
    if (name == "F3-faithful") return fixture_f3_faithful(k);
    return std::nullopt;
}

std::optional<StructureFixture> structure_fixture(const std::string& name) {
    Field k = Field::rationals();
    if (name == "F4") return fixture_f4(k);
    if (name == "F2-module") return fixture_f2_module(k);
    return std::nullopt;
}

TwoStepObject counterexample_for(const std::string& quiver) {
    if (quiver == "threeloop") return build_counterexample_threeloop();
    if (quiver == "kronecker4") return build_counterexample_kronecker4();
    throw Error(ErrorCode::InvalidArgument, "no counterexample for '" + quiver + "' (threeloop, kronecker4)");
}

void certificate_result(Report& r, const TwoStepObject& z, const LiftCertificate& c) {
    r.result("verdict", to_string(c.verdict));
    r.result("coboundary_rank", c.coboundary_rank);
    r.result("augmented_rank", c.augmented_rank);
    r.result("hh1_rank", c.hh1_basis.size());
    r.result("class_coordinates", to_json(c.class_coordinates));
    if (c.witness) r.result("witness", to_json(*c.witness));
    if (c.unit) {
        r.result("unit", {{"pi11", to_json(c.unit->pi11)}, {"pi22", to_json(c.unit->pi22)}, {"pi21", to_json(c.unit->pi21)}});
        auto back = rederive_phi21(z.bimodule(), *c.unit);
        r.check("unit reproduces phi21", back == z.phi21());
    }
    r.check("certificate re-verifies from scratch", verify_certificate(z, c));
    if (c.verdict == LiftVerdict::obstructed) {
        r.check("augmented rank exceeds coboundary rank by one", c.augmented_rank == c.coboundary_rank + 1);
        r.verdict("obstructed", true);
    } else {
        r.verdict("lifts", false);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exactlift: exact computations for quiver representations, Hochschild cohomology, "
                 "lifting obstructions and A-infinity structures"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--seed", g.seed, "seed for randomized suites")->capture_default_str();
    app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"report", "summary"}))->capture_default_str();
    app.add_flag("--timing", g.timing, "print wall time to stderr");
    app.add_option("--inject-fault", g.fault, "negative control: suspension-sign")
        ->check(CLI::IsMember({"suspension-sign"}))
        ->group("Testing");

    std::string command;
    std::function<void(Report&)> action;
    auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help) {
        CLI::App* s = parent->add_subcommand(name, help);
        s->parse_complete_callback([&command, parent, name] { command = parent->get_name() + " " + name; });
        return s;
    };

    // ------------------------------------------------------------ quiver
    CLI::App* quiver = app.add_subcommand("quiver", "dimension-vector combinatorics");
    quiver->require_subcommand(1);
    std::string qname, va, vb;
    long search_n = 1, bound = 4;
    auto quiver_args = [&](CLI::App* s, int vectors) {
        s->add_option("quiver", qname, "named quiver or .json file")->required();
        if (vectors >= 1) s->add_option("a", va, "dimension vector, e.g. 1,1")->required();
        if (vectors >= 2) s->add_option("b", vb, "dimension vector")->required();
    };
    auto* q_euler = leaf(quiver, "euler", "Euler form <a, b>");
    quiver_args(q_euler, 2);
    q_euler->final_callback([&] {
        action = [&](Report& r) {
            Quiver q = cli::quiver_argument(qname);
            DimVector a = vector_arg(q, va), b = vector_arg(q, vb);
            long e = euler_form(q, a, b);
            r.result("euler_form", e);
            r.check("agrees with sum a_i b_i - sum over arrows", e == euler_by_hand(q, a, b));
        };
    });
    auto* q_sym = leaf(quiver, "symform", "symmetrized form (a, b)");
    quiver_args(q_sym, 2);
    q_sym->final_callback([&] {
        action = [&](Report& r) {
            Quiver q = cli::quiver_argument(qname);
            DimVector a = vector_arg(q, va), b = vector_arg(q, vb);
            long s = symmetric_form(q, a, b);
            r.result("symmetric_form", s);
            r.check("equals <a,b> + <b,a>", s == euler_by_hand(q, a, b) + euler_by_hand(q, b, a));
        };
    });
    auto* q_fund = leaf(quiver, "fundamental", "membership in the fundamental region");
    quiver_args(q_fund, 1);
    q_fund->final_callback([&] {
        action = [&](Report& r) {
            Quiver q = cli::quiver_argument(qname);
            DimVector a = vector_arg(q, va);
            bool in = in_fundamental_region(q, a);
            json pairings = json::array();
            bool all_nonpositive = true;
            for (size_t i = 0; i < a.size(); ++i) {
                long p = symmetric_form(q, unit_dim(a.size(), i), a);
                pairings.push_back(p);
                all_nonpositive = all_nonpositive && p <= 0;
            }
            r.result("in_fundamental_region", in);
            r.result("indivisible", is_indivisible(a));
            r.result("vertex_pairings", pairings);
            if (in) r.check("every (e_i, a) <= 0", all_nonpositive);
        };
    });
    auto* q_search = leaf(quiver, "search", "smallest indivisible a in F(Q) with (a,a) <= -n");
    q_search->add_option("quiver", qname, "named quiver or .json file")->required();
    q_search->add_option("n", search_n, "bound on (a, a)")->required();
    q_search->add_option("--bound", bound, "largest entry tried")->capture_default_str();
    q_search->final_callback([&] {
        action = [&](Report& r) {
            Quiver q = cli::quiver_argument(qname);
            auto a = find_indivisible_negative(q, search_n, bound);
            if (!a) {
                r.result("found", false);
                r.verdict("none within bound " + std::to_string(bound), true);
                return;
            }
            r.result("found", true);
            r.result("vector", *a);
            r.result("self_pairing", symmetric_form(q, *a, *a));
            r.check("in the fundamental region", in_fundamental_region(q, *a));
            r.check("indivisible", is_indivisible(*a));
            r.check("(a, a) <= -n", symmetric_form(q, *a, *a) <= -search_n);
        };
    });
    auto* q_codim = leaf(quiver, "codim", "codimension vector");
    quiver_args(q_codim, 1);
    q_codim->final_callback([&] {
        action = [&](Report& r) {
            Quiver q = cli::quiver_argument(qname);
            DimVector a = vector_arg(q, va);
            auto c = codim_vector(q, a);
            r.result("codim_vector", c);
            bool ok = true;
            for (size_t i = 0; i < a.size(); ++i) ok = ok && c[i] == euler_by_hand(q, a, unit_dim(a.size(), i));
            r.check("pairs with unit vectors as <a, e_i>", ok);
        };
    });
    auto* q_moduli = leaf(quiver, "moduli-dim", "dimension of the moduli space at a");
    quiver_args(q_moduli, 1);
    q_moduli->final_callback([&] {
        action = [&](Report& r) {
            Quiver q = cli::quiver_argument(qname);
            DimVector a = vector_arg(q, va);
            long d = moduli_dimension(q, a);
            r.result("moduli_dimension", d);
            r.check("equals 1 - <a, a>", d == 1 - euler_by_hand(q, a, a));
        };
    });

    // ------------------------------------------------------------ rep
    CLI::App* rep = app.add_subcommand("rep", "representations: Hom, Ext, Schur, stability");
    rep->require_subcommand(1);
    std::string rv, rw, lambda;
    std::uint64_t enum_budget = default_budgets().enumeration;
    auto rep_args = [&](CLI::App* s, int count) {
        s->add_option("v", rv, "representation: builtin name or .json file")->required();
        if (count >= 2) s->add_option("w", rw, "representation")->required();
    };
    auto euler_check = [](Report& r, const QuiverRep& v, const QuiverRep& w, size_t hom, size_t ext) {
        if (!(v.quiver() == w.quiver())) return;
        r.check("dim Hom - dim Ext = <dim V, dim W>",
                long(hom) - long(ext) == euler_by_hand(v.quiver(), v.dims(), w.dims()));
    };
    auto* r_hom = leaf(rep, "hom", "Hom(V, W)");
    rep_args(r_hom, 2);
    r_hom->final_callback([&] {
        action = [&](Report& r) {
            QuiverRep v = cli::rep_argument(rv), w = cli::rep_argument(rw);
            HomSpace h = hom_space(v, w);
            r.result("dim_hom", h.dim);
            bool ok = true;
            for (const auto& f : h.basis) ok = ok && is_morphism(v, w, f);
            r.check("basis elements are morphisms", ok);
            euler_check(r, v, w, h.dim, ext_space(v, w).dim());
        };
    });
    auto* r_ext = leaf(rep, "ext", "Ext^1(V, W)");
    rep_args(r_ext, 2);
    r_ext->final_callback([&] {
        action = [&](Report& r) {
            QuiverRep v = cli::rep_argument(rv), w = cli::rep_argument(rw);
            ExtSpace e = ext_space(v, w);
            r.result("dim_ext1", e.dim());
            json reps = json::array();
            for (size_t i = 0; i < e.dim(); ++i) {
                json arrows = json::object();
                auto m = e.representative(i);
                for (size_t a = 0; a < m.size(); ++a) arrows[v.quiver().arrow(int(a)).id] = to_json(m[a]);
                reps.push_back(arrows);
            }
            r.result("representatives", reps);
            euler_check(r, v, w, hom_space(v, w).dim, e.dim());
        };
    });
    auto* r_end = leaf(rep, "end", "End(V)");
    rep_args(r_end, 1);
    r_end->final_callback([&] {
        action = [&](Report& r) {
            QuiverRep v = cli::rep_argument(rv);
            HomSpace h = hom_space(v, v);
            r.result("dim_end", h.dim);
            euler_check(r, v, v, h.dim, ext_space(v, v).dim());
        };
    });
    auto* r_schur = leaf(rep, "schur", "is End(V) the base field");
    rep_args(r_schur, 1);
    r_schur->final_callback([&] {
        action = [&](Report& r) {
            QuiverRep v = cli::rep_argument(rv);
            bool s = is_schur(v);
            size_t d = hom_space(v, v).dim;
            r.result("schur", s);
            r.result("dim_end", d);
            r.check("agrees with dim End = 1", s == (d == 1));
        };
    });
    auto* r_perp = leaf(rep, "perp", "W perpendicular to V (Hom = Ext = 0)");
    r_perp->add_option("w", rw, "representation")->required();
    r_perp->add_option("v", rv, "representation")->required();
    r_perp->final_callback([&] {
        action = [&](Report& r) {
            QuiverRep w = cli::rep_argument(rw), v = cli::rep_argument(rv);
            if (w.field() != v.field()) w = extend_scalars(w, v.field());
            bool p = perp_check(w, v);
            size_t h = hom_space(w, v).dim, e = ext_space(w, v).dim();
            r.result("perpendicular", p);
            r.result("dim_hom", h);
            r.result("dim_ext1", e);
            r.check("agrees with Hom and Ext", p == (h == 0 && e == 0));
        };
    });
    auto* r_wit = leaf(rep, "witness", "W is a semistability witness for V at lambda");
    r_wit->add_option("w", rw, "representation")->required();
    r_wit->add_option("v", rv, "representation")->required();
    r_wit->add_option("--lambda", lambda, "weight, e.g. -1,1")->required();
    r_wit->final_callback([&] {
        action = [&](Report& r) {
            QuiverRep w = cli::rep_argument(rw), v = cli::rep_argument(rv);
            if (w.field() != v.field()) w = extend_scalars(w, v.field());
            Weight l = vector_arg(v.quiver(), lambda);
            bool ok = semistable_witness_check(w, v, l);
            r.result("witness", ok);
            r.result("codim_vector", codim_vector(w.quiver(), w.dims()));
            if (ok) r.check("W is perpendicular to V", perp_check(w, v));
        };
    });
    auto* r_stab = leaf(rep, "stability", "exhaustive stability over a finite field");
    rep_args(r_stab, 1);
    r_stab->add_option("--lambda", lambda, "weight")->required();
    r_stab->add_option("--budget", enum_budget, "largest number of subspace tuples examined")->capture_default_str();
    r_stab->final_callback([&] {
        action = [&](Report& r) {
            QuiverRep v = cli::rep_argument(rv);
            Weight l = vector_arg(v.quiver(), lambda);
            auto s = stability_bruteforce(v, l, enum_budget);
            r.result("verdict", to_string(s.verdict));
            r.result("subreps_examined", s.subreps_examined);
            if (s.witness) {
                r.result("witness_dims", *s.witness);
                long lw = dot(l, *s.witness), lv = dot(l, v.dims());
                if (s.verdict == StabilityVerdict::unstable)
                    r.check("witness violates lambda.beta >= lambda.alpha", lw < lv);
                else
                    r.check("witness attains equality", lw == lv);
            }
        };
    });

    // ------------------------------------------------------------ hoch
    CLI::App* hoch = app.add_subcommand("hoch", "Hochschild cohomology");
    hoch->require_subcommand(1);
    std::string alg = "dual-numbers", bimod = "regular", mod_m = "regular", mod_n = "regular", input, mode = "lift_object",
                field_text = "QQ(x,y,z)";
    int hn = 1, max_arity = default_budgets().max_arity;
    std::optional<int> hj;
    bool full = false;
    long kdim = 1;
    auto* h_bar = leaf(hoch, "bar", "HH^n(B, M) from the bar complex");
    h_bar->add_option("--algebra", alg, "builtin algebra or .json file")->capture_default_str();
    h_bar->add_option("--bimodule", bimod, "regular or .json file")->capture_default_str();
    h_bar->add_option("--n", hn, "cohomological degree")->capture_default_str();
    h_bar->add_option("--j", hj, "internal degree (all when omitted)");
    h_bar->add_flag("--full", full, "unnormalized cochains");
    h_bar->final_callback([&] {
        action = [&](Report& r) {
            GradedAlgebra b = cli::load_algebra(argument_node(alg, "--algebra"));
            GradedBimodule m = cli::load_bimodule(b, argument_node(bimod, "--bimodule"));
            BarOptions o;
            o.normalized = !full;
            auto rep = bar_hh(b, m, hn, hj, o);
            r.result("hh", cohomology_json(rep));
            r.check("d^2 = 0", rep.d_squared_zero);
            if (!full && hn <= 3) {
                BarOptions f = o;
                f.normalized = false;
                r.check("normalized and unnormalized ranks agree", bar_hh(b, m, hn, hj, f).rank == rep.rank);
            }
        };
    });
    auto* h_kos = leaf(hoch, "koszul", "HH^n(L, M) from the Koszul complex");
    h_kos->add_option("--field", field_text, "function field; M is symmetric of dimension --dim")->capture_default_str();
    h_kos->add_option("--dim", kdim, "dimension of M")->capture_default_str();
    h_kos->add_option("--input", input, ".json with field, dim, delta");
    h_kos->add_option("--n", hn, "degree")->capture_default_str();
    h_kos->final_callback([&] {
        action = [&](Report& r) {
            bool symmetric = input.empty();
            std::optional<KoszulBimodule> m;
            if (symmetric) {
                Field l = Field::parse(field_text);
                if (!l.is_function_field()) throw Error(ErrorCode::InvalidArgument, "--field must be a function field");
                m = KoszulBimodule::symmetric(l, l.nvars(), size_t(kdim));
            } else {
                m = cli::load_koszul(cli::Node::root(cli::Document::load(input))).module;
            }
            auto rep = koszul_hh(*m, hn);
            r.result("hh", cohomology_json(rep));
            r.check("d^2 = 0", rep.d_squared_zero);
            if (symmetric) {
                size_t c = 1;
                int d = m->d();
                if (hn < 0 || hn > d) c = 0;
                else
                    for (int i = 0; i < hn; ++i) c = c * size_t(d - i) / size_t(i + 1);
                r.check("symmetric rank law dim * C(d, n)", rep.rank == size_t(kdim) * c);
            }
        };
    });
    auto* h_der = leaf(hoch, "derivation-check", "is the given cochain a derivation (Koszul 1-cocycle)");
    h_der->add_option("--input", input, ".json with field, dim, delta, derivation")->required();
    h_der->final_callback([&] {
        action = [&](Report& r) {
            auto in = cli::load_koszul(cli::Node::root(cli::Document::load(input)));
            if (in.derivation.empty()) throw Error(ErrorCode::InvalidArgument, "input has no 'derivation'");
            bool d = derivation_check(in.module, in.derivation);
            r.result("derivation", d);
            // the Koszul cocycle condition delta_i e_j = delta_j e_i, checked entry by entry here
            bool by_hand = true;
            for (int i = 0; i < in.module.d(); ++i)
                for (int j = i + 1; j < in.module.d(); ++j)
                    by_hand = by_hand && in.module.delta(i).apply(in.derivation[size_t(j)]) ==
                                             in.module.delta(j).apply(in.derivation[size_t(i)]);
            r.check("agrees with delta_i e_j = delta_j e_i", d == by_hand);
        };
    });
    auto* h_inner = leaf(hoch, "inner", "is the derivation inner, with a witness");
    h_inner->add_option("--input", input, ".json with field, dim, delta, derivation")->required();
    h_inner->final_callback([&] {
        action = [&](Report& r) {
            auto in = cli::load_koszul(cli::Node::root(cli::Document::load(input)));
            if (in.derivation.empty()) throw Error(ErrorCode::InvalidArgument, "input has no 'derivation'");
            auto w = is_inner(in.module, in.derivation);
            r.result("inner", bool(w));
            if (w) {
                r.result("witness", to_json(*w));
                bool ok = true;
                for (int i = 0; i < in.module.d(); ++i)
                    ok = ok && in.module.delta(i).apply(*w) == in.derivation[size_t(i)];
                r.check("delta_i(witness) = e_i", ok);
            } else {
                r.verdict("not inner", true);
            }
        };
    });
    auto* h_cond = leaf(hoch, "condition", "vanishing of the HH groups that carry lifting obstructions");
    h_cond->add_option("--algebra", alg, "builtin algebra or .json file")->capture_default_str();
    h_cond->add_option("--bimodule", bimod, "regular or .json file")->capture_default_str();
    h_cond->add_option("--mode", mode, "lift_object, lift_morphism or faithful")->capture_default_str();
    h_cond->add_option("--max-arity", max_arity, "largest n examined")->capture_default_str();
    h_cond->final_callback([&] {
        action = [&](Report& r) {
            GradedAlgebra b = cli::load_algebra(argument_node(alg, "--algebra"));
            GradedBimodule m = cli::load_bimodule(b, argument_node(bimod, "--bimodule"));
            auto c = hh_condition(b, m, parse_lift_mode(mode), max_arity);
            r.result("mode", to_string(c.mode));
            r.result("holds", c.holds);
            r.result("verified_to", c.verified_to);
            json entries = json::array();
            bool d2 = true;
            for (const auto& e : c.entries) entries.push_back(cohomology_json(e)), d2 = d2 && e.d_squared_zero;
            r.result("entries", entries);
            r.check("d^2 = 0 on every examined complex", d2);
            if (!c.holds) r.verdict("condition fails", true);
        };
    });
    int ext_p = 1;
    auto* h_ext = leaf(hoch, "ext", "Ext^p_B(M, N), cross-checked against HH^p(B, Hom(M, N))");
    h_ext->add_option("--algebra", alg, "builtin algebra (degree 0) or .json file")->capture_default_str();
    h_ext->add_option("--m", mod_m, "regular, column, or .json file")->capture_default_str();
    h_ext->add_option("--n", mod_n, "regular, column, or .json file")->capture_default_str();
    h_ext->add_option("--p", ext_p, "degree")->capture_default_str();
    h_ext->final_callback([&] {
        action = [&](Report& r) {
            GradedAlgebra b = cli::load_algebra(argument_node(alg, "--algebra"));
            LeftModule m = cli::load_left_module(b, argument_node(mod_m, "--m"));
            LeftModule n = cli::load_left_module(b, argument_node(mod_n, "--n"));
            auto e = ext_via_bar(b, m, n, ext_p);
            r.result("ext", cohomology_json(e));
            auto h = bar_hh(b, hom_bimodule(b, m, n), ext_p, 0);
            r.check("equals rank HH^p(B, Hom_k(M, N))", e.rank == h.rank, {{"hh_rank", h.rank}});
        };
    });

    // ------------------------------------------------------------ lift
    CLI::App* lift = app.add_subcommand("lift", "lifting two-term objects along an L-action");
    lift->require_subcommand(1);
    std::string lquiver = "threeloop";
    auto* l_test = leaf(lift, "test", "decide whether phi21 is inner");
    l_test->add_option("--input", input, ".json with u, v, phi21")->required();
    l_test->final_callback([&] {
        action = [&](Report& r) {
            auto z = cli::load_two_step(cli::Node::root(cli::Document::load(input)));
            certificate_result(r, z, lift_test(z));
        };
    });
    auto* l_ce = leaf(lift, "counterexample", "the obstructed object built from a generic point");
    l_ce->add_option("--quiver", lquiver, "threeloop or kronecker4")->capture_default_str();
    l_ce->final_callback([&] {
        action = [&](Report& r) {
            auto z = counterexample_for(lquiver);
            r.result("ext_dim", z.bimodule().ext.dim());
            certificate_result(r, z, lift_test(z));
        };
    });
    auto* l_ranks = leaf(lift, "ext-hom-ranks", "rank HH^{1+i}(L, Ext^1(U,V)) against rank HH^{3+i}(L, Hom(U,V))");
    l_ranks->add_option("--quiver", lquiver, "threeloop or kronecker4 (the counterexample pair)")->capture_default_str();
    l_ranks->add_option("--input", input, ".json with u, v (phi21 ignored)");
    l_ranks->final_callback([&] {
        action = [&](Report& r) {
            std::optional<TwoStepObject> z;
            if (!input.empty())
                z = cli::load_two_step(cli::Node::root(cli::Document::load(input)));
            else
                z = counterexample_for(lquiver);
            auto e = ext_hom_rank_check(z->u(), z->v());
            r.result("d", e.d);
            r.result("ext_dim", e.ext_dim);
            r.result("hom_dim", e.hom_dim);
            for (const auto& row : e.rows) {
                r.result("i=" + std::to_string(row.i), {{"ext_rank", row.ext_rank}, {"hom_rank", row.hom_rank}});
                r.check("ranks agree at i=" + std::to_string(row.i), row.equal);
            }
        };
    });

    // ------------------------------------------------------------ ainfty
    CLI::App* ainfty = app.add_subcommand("ainfty", "A-infinity structures and their lifting obstructions");
    ainfty->require_subcommand(1);
    std::string fixture;
    int arity = default_budgets().max_arity;
    std::optional<std::uint64_t> gauge;
    std::string hmap = "lift";
    auto* a_check = leaf(ainfty, "check", "b o b = 0 for a DG algebra up to an arity");
    a_check->add_option("--algebra", alg, "builtin algebra or .json file")->capture_default_str();
    a_check->add_option("--arity", arity, "largest arity")->capture_default_str();
    a_check->final_callback([&] {
        action = [&](Report& r) {
            GradedAlgebra b = cli::load_algebra(argument_node(alg, "--algebra"));
            auto a = AInftyAlgebra::from_dg(b, std::max(arity, 2));
            auto v = coderivation_square(a, arity);
            json bad = json::array();
            for (const auto& x : v) bad.push_back({{"arity", x.arity}, {"nonzeros", x.nonzeros}});
            r.result("violations", bad);
            r.result("strict_unit", a.strict_unit_holds());
            r.check("b o b vanishes, verified to arity " + std::to_string(arity), v.empty());
        };
    });
    auto* a_alg = leaf(ainfty, "lift-alg", "extend a chain map to an A-infinity morphism");
    a_alg->add_option("--fixture", fixture, "F1, F2, F2-, matrix");
    a_alg->add_option("--input", input, ".json with source, target, phi");
    a_alg->add_option("--arity", arity, "target arity")->capture_default_str();
    a_alg->add_option("--gauge-seed", gauge, "add seeded exact terms to every solve");
    a_alg->final_callback([&] {
        action = [&](Report& r) {
            std::optional<AlgebraMorphismFixture> f;
            if (!input.empty())
                f = cli::load_algebra_morphism(cli::Node::root(cli::Document::load(input)));
            else if (!(f = algebra_fixture(fixture)))
                throw Error(ErrorCode::InvalidArgument, "unknown fixture '" + fixture + "' (F1, F2, F2-, matrix)");
            LiftOptions o;
            o.arity = arity;
            o.gauge_seed = gauge;
            auto H = cohomology_algebra(f->a, algebra_cohomology(f->a));
            auto cond = hh_condition(H, cohomology_bimodule(f->a, f->c, f->phi), LiftMode::lift_object, arity);
            r.result("condition_holds", cond.holds);
            auto res = lift_algebra_morphism(f->a, f->c, f->phi, o);
            lift_result(r, res, arity, [&](int n) { return morphism_residual(f->a, f->c, res.map, n).is_zero_up_to(n); });
            if (cond.holds) r.check("condition holds, so the lift succeeds", res.success);
        };
    });
    auto* a_mod = leaf(ainfty, "lift-mod", "extend a chain map of modules to an A-infinity module morphism");
    a_mod->add_option("--fixture", fixture, "F3, F3-faithful")->required();
    a_mod->add_option("--arity", arity, "target arity")->capture_default_str();
    a_mod->add_option("--gauge-seed", gauge, "add seeded exact terms to every solve");
    a_mod->final_callback([&] {
        action = [&](Report& r) {
            auto f = module_fixture(fixture);
            if (!f) throw Error(ErrorCode::InvalidArgument, "unknown fixture '" + fixture + "' (F3, F3-faithful)");
            LiftOptions o;
            o.arity = arity;
            o.gauge_seed = gauge;
            auto H = cohomology_algebra(f->m.algebra(), algebra_cohomology(f->m.algebra()));
            auto cond = hh_condition(H, cohomology_hom_bimodule(f->m, f->n), LiftMode::lift_morphism, arity);
            r.result("condition_holds", cond.holds);
            auto res = lift_module_morphism(f->m, f->n, f->f1, o);
            lift_result(r, res, arity,
                        [&](int n) { return module_morphism_residual(f->m, f->n, res.map, n).is_zero_up_to(n); });
            if (cond.holds) r.check("condition holds, so the lift succeeds", res.success);
        };
    });
    auto* a_null = leaf(ainfty, "nullhomotopy", "solve g = b h + h b for a module morphism g");
    a_null->add_option("--fixture", fixture, "F3-faithful, F3")->required();
    a_null->add_option("--map", hmap, "lift (the lifted f1) or zero")->capture_default_str();
    a_null->add_option("--arity", arity, "target arity")->capture_default_str();
    a_null->final_callback([&] {
        action = [&](Report& r) {
            auto f = module_fixture(fixture);
            if (!f) throw Error(ErrorCode::InvalidArgument, "unknown fixture '" + fixture + "' (F3, F3-faithful)");
            TaylorMap gmap(f->m.algebra().field(), f->m.b().bar(), f->m.space(), f->n.space(), 0, arity);
            if (hmap == "lift") {
                LiftOptions o;
                o.arity = arity;
                auto l = lift_module_morphism(f->m, f->n, f->f1, o);
                if (!l.success) {
                    r.result("lift_verified_to", l.verified_to);
                    r.verdict("the map itself does not lift to arity " + std::to_string(arity), true);
                    return;
                }
                gmap = l.map;
            } else if (hmap != "zero") {
                throw Error(ErrorCode::InvalidArgument, "--map must be lift or zero");
            }
            NullhomotopyOptions o;
            o.arity = arity;
            try {
                auto h = nullhomotopy(f->m, f->n, gmap, o);
                r.result("verified_to", h.verified_to);
                if (h.conditions) r.result("condition_holds", h.conditions->holds);
                size_t agree = 0;
                for (int n = 1; n <= arity; ++n) {
                    SparseMatrix lhs = module_bracket(f->m, f->n, h.h, n), rhs = gmap.component(n);
                    agree += lhs.to_dense() == rhs.to_dense();
                }
                r.check("g = b h + h b componentwise to arity " + std::to_string(arity), agree == size_t(arity));
                r.verdict("null-homotopic, verified to arity " + std::to_string(h.verified_to), false);
            } catch (const Error& e) {
                if (e.code() != ErrorCode::ObstructionNonzero) throw;
                r.result("obstruction", e.what());
                r.verdict("not null-homotopic", true);
            }
        };
    });
    auto* a_str = leaf(ainfty, "lift-structure", "A-infinity module structure inducing a cohomology action");
    a_str->add_option("--fixture", fixture, "F4, F2-module");
    a_str->add_option("--input", input, ".json with algebra, names, degrees, d, action");
    a_str->add_option("--arity", arity, "target arity")->capture_default_str();
    a_str->final_callback([&] {
        action = [&](Report& r) {
            std::optional<StructureFixture> f;
            if (!input.empty())
                f = cli::load_structure(cli::Node::root(cli::Document::load(input)));
            else if (!(f = structure_fixture(fixture)))
                throw Error(ErrorCode::InvalidArgument, "unknown fixture '" + fixture + "' (F4, F2-module)");
            LiftOptions o;
            o.arity = arity;
            try {
                auto res = lift_module_structure(f->b, f->space, f->d, f->action, o);
                r.result("given_action_used", res.given_action_used);
                r.result("chain_action", to_json(res.chain_action));
                if (res.conditions) r.result("condition_holds", res.conditions->holds);
                r.result("strictly_unital", res.strictly_unital);
                LiftResult l = res.lift;
                auto E = AInftyAlgebra::from_dg(endomorphism_algebra(f->b.field(), f->space, f->d), std::max(arity, 2));
                lift_result(r, l, arity, [&](int n) { return morphism_residual(f->b, E, l.map, n).is_zero_up_to(n); });
                if (res.module) r.check("module relations hold to arity " + std::to_string(arity), module_square(*res.module, arity).empty());
            } catch (const Error& e) {
                if (e.code() != ErrorCode::NoChainLevelLift) throw;
                r.result("reason", e.what());
                r.verdict("no chain-level action", true);
            }
        };
    });

    // ------------------------------------------------------------ suite
    CLI::App* suite = app.add_subcommand("suite", "reproduction of the worked examples and property suites");
    suite->require_subcommand(1);
    std::vector<int> only;
    auto* s_rep = leaf(suite, "reproduce-paper", "run every reproduction block");
    s_rep->add_option("--only", only, "block numbers to run")->check(CLI::Range(1, cli::suite_block_count()));
    s_rep->final_callback([&] {
        action = [&](Report& r) {
            cli::SuiteOptions o;
            o.seed = g.seed;
            std::vector<int> ids = only;
            if (ids.empty())
                for (int i = 1; i <= cli::suite_block_count(); ++i) ids.push_back(i);
            for (int id : ids) {
                auto b = cli::run_suite_block(id, o);
                if (g.timing) std::fprintf(stderr, "block %d %s: %.2f s\n", id, b.name.c_str(), b.seconds);
                std::string tag = "block " + std::to_string(id) + " " + b.name;
                for (const auto& row : b.rows) {
                    r.result(tag + " / " + row.key, row.facts);
                    r.check(tag + " / " + row.key, row.pass);
                }
                r.result(tag, b.pass() ? "PASS" : "FAIL");
            }
        };
    });

    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cout << json{{"error", "UsageError"}, {"message", e.what()}}.dump() << '\n'
                  << json{{"status", "invalid"}, {"exit", int(cli::exit_invalid)}}.dump() << '\n';
        return cli::exit_invalid;
    } catch (const Error& e) {
        std::cerr << e.what() << '\n';
        return cli::exit_invalid;
    }
    if (g.fault == "suspension-sign") faults().suspension_sign = true;

    Report report(command, args);
    auto invalid = [&](const std::string& name, const std::string& message, std::optional<std::pair<int, int>> pos) {
        json err{{"error", name}, {"message", message}};
        if (pos) err["line"] = pos->first, err["column"] = pos->second;
        if (g.format == "summary") {
            std::cout << command << ": " << message << '\n';
        } else {
            std::cout << json{{"schema", cli::report_schema}, {"command", command}, {"args", args}}.dump() << '\n'
                      << err.dump() << '\n'
                      << json{{"status", "invalid"}, {"exit", int(cli::exit_invalid)}}.dump() << '\n';
        }
        std::cerr << message << '\n';
        return int(cli::exit_invalid);
    };
    try {
        action(report);
    } catch (const ParseError& e) {
        return invalid("ParseError", e.what(), std::pair{e.line(), e.column()});
    } catch (const Error& e) {
        return invalid(std::string(error_name(e.code())), e.what(), std::nullopt);
    }
    report.emit(std::cout, g.format);
    if (g.timing) std::fprintf(stderr, "%s: %.3f s\n", command.c_str(), report.seconds());
    return report.exit_code();
}
