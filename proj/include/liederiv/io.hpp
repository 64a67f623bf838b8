#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "liederiv/derivations.hpp"
#include "liederiv/lie_algebra.hpp"
#include "liederiv/linear_map.hpp"
#include "liederiv/local_derivations.hpp"
#include "liederiv/proof_replay.hpp"
#include "liederiv/schrodinger.hpp"

namespace liederiv {

using json = nlohmann::ordered_json;

/// Raised when a loaded bracket table violates the Jacobi identity.
struct JacobiError : std::runtime_error {
    std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> violations;
    explicit JacobiError(std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> v)
        : std::runtime_error("bracket table violates the Jacobi identity on " +
                             std::to_string(v.size()) + " basis triple(s)"),
          violations(std::move(v)) {}
};

// ---------------------------------------------------------------------------
// vectors and maps

inline json vec_to_json(const Vec& v) {
    json a = json::array();
    for (const Rat& x : v) a.push_back(rat_to_string(x));
    return a;
}

inline Vec vec_from_json(const json& a) {
    if (!a.is_array()) throw std::runtime_error("vector json: expected an array of scalars");
    Vec v;
    v.reserve(a.size());
    for (const auto& x : a) {
        if (!x.is_string()) throw std::runtime_error("vector json: scalars must be strings");
        v.push_back(rat_from_string(x.get<std::string>()));
    }
    return v;
}

/// { "dim": d, "matrix": [["p/q", ...], ...] }, row-major.
inline json map_to_json(const LinearMap& m) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.dim(); ++r) rows.push_back(vec_to_json(m.m.row(r)));
    return json{{"dim", m.dim()}, {"matrix", rows}};
}

inline LinearMap map_from_json(const json& j) {
    if (!j.is_object() || !j.contains("dim") || !j.contains("matrix"))
        throw std::runtime_error("map json: expected {dim, matrix}");
    const auto d = j.at("dim").get<std::size_t>();
    const json& rows = j.at("matrix");
    if (!rows.is_array() || rows.size() != d)
        throw std::runtime_error("map json: matrix must have `dim` rows");
    Mat m(d, d);
    for (std::size_t r = 0; r < d; ++r) {
        const Vec row = vec_from_json(rows.at(r));
        if (row.size() != d) throw std::runtime_error("map json: matrix rows must have `dim` entries");
        for (std::size_t c = 0; c < d; ++c) m(r, c) = row[c];
    }
    return LinearMap(std::move(m));
}

// ---------------------------------------------------------------------------
// algebras

/// { "dim": d, "labels": [...], "brackets": [[i, j, [[k, "p/q"], ...]], ...] },
/// 0-based indices, i < j, brackets listed in definition order.
inline json algebra_to_json(const LieAlgebra& L) {
    json brackets = json::array();
    for (const auto& r : L.relations()) {
        json terms = json::array();
        for (const auto& [k, c] : r.terms) terms.push_back(json::array({k, rat_to_string(c)}));
        brackets.push_back(json::array({r.i, r.j, terms}));
    }
    return json{{"dim", L.dim()}, {"labels", L.labels()}, {"brackets", brackets}};
}

namespace detail {
/// True for json numbers holding a non-negative integer. In-memory documents
/// built from int literals store signed numbers even when non-negative, so
/// is_number_unsigned() alone would reject them.
inline bool is_nonneg_int(const json& v) {
    return v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0);
}
}  // namespace detail

inline LieAlgebra algebra_from_json(const json& j, bool skip_jacobi = false,
                                    const std::string& name = "") {
    if (!j.is_object() || !j.contains("dim") || !j.contains("labels") || !j.contains("brackets"))
        throw std::runtime_error("algebra json: expected {dim, labels, brackets}");
    if (!detail::is_nonneg_int(j.at("dim")))
        throw std::runtime_error("algebra json: dim must be a non-negative integer");
    const auto d = j.at("dim").get<std::size_t>();
    const json& jl = j.at("labels");
    if (!jl.is_array() || jl.size() != d)
        throw std::runtime_error("algebra json: labels must be an array of `dim` strings");
    std::vector<std::string> labels;
    for (const auto& s : jl) {
        if (!s.is_string()) throw std::runtime_error("algebra json: labels must be strings");
        labels.push_back(s.get<std::string>());
    }
    LieAlgebra L(name.empty() ? "dim" + std::to_string(d) : name, std::move(labels));

    const json& jb = j.at("brackets");
    if (!jb.is_array()) throw std::runtime_error("algebra json: brackets must be an array");
    std::map<std::pair<std::size_t, std::size_t>, bool> seen;
    for (const auto& entry : jb) {
        if (!entry.is_array() || entry.size() != 3)
            throw std::runtime_error("algebra json: each bracket must be [i, j, terms]");
        if (!detail::is_nonneg_int(entry.at(0)) || !detail::is_nonneg_int(entry.at(1)))
            throw std::runtime_error("algebra json: bracket indices must be non-negative integers");
        const auto i = entry.at(0).get<std::size_t>();
        const auto jj = entry.at(1).get<std::size_t>();
        if (i >= d || jj >= d) throw std::runtime_error("algebra json: bracket index out of range");
        if (i >= jj) throw std::runtime_error("algebra json: bracket pairs must satisfy i < j");
        if (seen.count({i, jj})) throw std::runtime_error("algebra json: duplicate bracket pair");
        seen[{i, jj}] = true;
        const json& jt = entry.at(2);
        if (!jt.is_array()) throw std::runtime_error("algebra json: bracket terms must be an array");
        SparseVec terms;
        for (const auto& t : jt) {
            if (!t.is_array() || t.size() != 2 || !detail::is_nonneg_int(t.at(0)) ||
                !t.at(1).is_string())
                throw std::runtime_error("algebra json: each term must be [k, \"p/q\"]");
            const auto k = t.at(0).get<std::size_t>();
            if (k >= d) throw std::runtime_error("algebra json: term index out of range");
            terms.emplace_back(k, rat_from_string(t.at(1).get<std::string>()));
        }
        L.set_bracket(i, jj, std::move(terms));
    }
    if (!skip_jacobi) {
        auto bad = L.jacobi_violations();
        if (!bad.empty()) throw JacobiError(std::move(bad));
    }
    return L;
}

// ---------------------------------------------------------------------------
// reports and traces

inline json decomposition_report_to_json(const std::string& algebra,
                                         const DecompositionReport& r) {
    return json{{"algebra", algebra},
                {"n", r.n},
                {"dim_der", r.dim_der},
                {"dim_inn", r.dim_inn},
                {"n_outer", r.n_outer},
                {"outer_are_derivations", r.outer_are_derivations},
                {"outer_independent_of_inner", r.outer_independent_of_inner},
                {"direct_sum", r.direct_sum}};
}

inline std::string decomposition_report_to_text(const std::string& algebra,
                                                const DecompositionReport& r) {
    std::ostringstream os;
    os << "derivation decomposition for " << algebra << "\n"
       << "  dim Der = " << r.dim_der << ", dim Inn = " << r.dim_inn
       << ", named outer derivations = " << r.n_outer << "\n"
       << "  outer maps are derivations: " << (r.outer_are_derivations ? "yes" : "NO") << "\n"
       << "  outer maps independent of inner: " << (r.outer_independent_of_inner ? "yes" : "NO")
       << "\n"
       << "  Inn (+) span(outer) = Der with trivial intersection: "
       << (r.direct_sum ? "yes" : "NO") << "\n";
    return os.str();
}

inline json locder_report_to_json(const LocDerReport& r) {
    json witnesses = json::array();
    for (const auto& w : r.witnesses) {
        json entry{{"map", map_to_json(w.map)}};
        entry["point"] = w.point ? vec_to_json(*w.point) : json(nullptr);
        witnesses.push_back(std::move(entry));
    }
    return json{{"algebra", r.algebra},
                {"dim_der", r.dim_der},
                {"dim_candidate", r.dim_candidate},
                {"status", to_string(r.status)},
                {"seed", r.seed},
                {"samples_used", r.samples_used},
                {"witnesses", witnesses}};
}

inline std::string locder_report_to_text(const LieAlgebra& L, const LocDerReport& r) {
    std::ostringstream os;
    os << "local derivation classification for " << r.algebra << "\n"
       << "  dim Der = " << r.dim_der << ", dim candidate = " << r.dim_candidate << " (seed "
       << r.seed << ", " << r.samples_used << " samples)\n"
       << "  status: " << to_string(r.status) << "\n";
    for (const auto& w : r.witnesses) {
        if (w.point)
            os << "  excess map refuted at x = " << format_element(L, *w.point) << "\n";
        else
            os << "  excess map: no refuting point found within budget\n";
    }
    return os.str();
}

inline json trace_to_json(const LieAlgebra& L, const ProofTrace& t) {
    json j{{"algebra", t.algebra}, {"n", t.n}, {"pattern_ok", t.pattern_ok}};
    j["input"] = map_to_json(t.input);
    if (t.failure)
        j["failure"] = json{{"stage", t.failure->stage}, {"message", t.failure->message}};
    else
        j["failure"] = nullptr;
    if (t.stage1_subtrahend) j["stage1_subtrahend"] = map_to_json(*t.stage1_subtrahend);
    if (t.delta_prime) j["delta_prime"] = map_to_json(*t.delta_prime);
    if (t.x0) {
        j["x0"] = vec_to_json(*t.x0);
        j["x0_pretty"] = format_element(L, *t.x0);
        j["lambda"] = rat_to_string(t.lambda);
        j["tau_coeff"] = rat_to_string(t.tau_coeff);
    }
    if (t.delta_dprime) j["delta_dprime"] = map_to_json(*t.delta_dprime);
    json lemmas = json::array();
    for (const auto& lv : t.lemmas) {
        json jl{{"id", lv.id}, {"pass", lv.pass}};
        json loc = json::array();
        for (const auto& l : lv.locality) loc.push_back(json{{"element", l.element}, {"ok", l.ok}});
        json coeffs = json::array();
        for (const auto& c : lv.coefficients)
            coeffs.push_back(
                json{{"name", c.name}, {"value", rat_to_string(c.value)}, {"zero", c.zero}});
        json conc = json::array();
        for (const auto& c : lv.conclusions)
            conc.push_back(json{{"statement", c.statement}, {"ok", c.ok}});
        jl["locality"] = std::move(loc);
        jl["coefficients"] = std::move(coeffs);
        jl["conclusions"] = std::move(conc);
        lemmas.push_back(std::move(jl));
    }
    j["lemmas"] = std::move(lemmas);
    j["residual"] = map_to_json(t.residual);
    j["residual_zero"] = t.residual.is_zero_map();
    j["decomposition_valid"] = t.decomposition_valid;
    return j;
}

inline std::string trace_to_text(const LieAlgebra& L, const ProofTrace& t) {
    std::ostringstream os;
    os << "replay trace for " << t.algebra << " (dim " << L.dim() << ")\n";
    os << "  block pattern: " << (t.pattern_ok ? "ok" : "VIOLATED") << "\n";
    if (t.stage1_subtrahend)
        os << "  stage 1: subtracted a derivation matching both corner blocks\n";
    if (t.x0) {
        os << "  stage 2: x0 = " << format_element(L, *t.x0)
           << ", lambda = " << rat_to_string(t.lambda);
        if (t.n == 2) os << ", tau coefficient = " << rat_to_string(t.tau_coeff);
        os << "\n";
    }
    for (const auto& lv : t.lemmas) {
        os << "  lemma " << lv.id << ": " << (lv.pass ? "pass" : "FAIL");
        if (!lv.pass) {
            for (const auto& l : lv.locality)
                if (!l.ok) os << "\n    not local at " << l.element;
            for (const auto& c : lv.coefficients)
                if (!c.zero) os << "\n    " << c.name << " = " << rat_to_string(c.value) << " != 0";
            for (const auto& c : lv.conclusions)
                if (!c.ok) os << "\n    conclusion fails: " << c.statement;
        }
        os << "\n";
    }
    if (t.failure)
        os << "  failed at " << t.failure->stage << ": " << t.failure->message << "\n";
    os << "  residual: " << (t.residual.is_zero_map() ? "zero" : "NONZERO") << "\n";
    os << "  decomposition: " << (t.decomposition_valid ? "valid" : "INVALID") << "\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// LaTeX emission

namespace detail {
inline std::string latex_basis_label(const SchrodingerBasis& B, std::size_t t) {
    if (t == B.e) return "e";
    if (t == B.f) return "f";
    if (t == B.h) return "h";
    if (t == B.z) return "z";
    for (std::size_t i = 1; i <= B.n; ++i) {
        if (t == B.u(i)) return "u_{" + std::to_string(i) + "}";
        if (t == B.v(i)) return "v_{" + std::to_string(i) + "}";
    }
    for (std::size_t k = 1; k <= B.n; ++k)
        for (std::size_t l = k + 1; l <= B.n; ++l)
            if (t == B.s(k, l))
                return "s_{" + std::to_string(k) + "," + std::to_string(l) + "}";
    throw std::logic_error("basis index out of range");
}

inline std::string latex_term(const Rat& c, const std::string& sym, bool leading) {
    std::string out;
    Rat a = c;
    const bool neg = a < 0;
    if (neg) a = -a;
    if (leading)
        out += neg ? "-" : "";
    else
        out += neg ? "-" : "+";
    if (a.get_den() == 1) {
        if (a != 1) out += a.get_str();
        out += sym;
    } else {
        out += "\\tfrac{" + a.get_num().get_str() + "}{" + a.get_den().get_str() + "}" + sym;
    }
    return out;
}
}  // namespace detail

/// LaTeX matrix of the general derivation of s_n in symbolic a-notation:
/// the inner part sum_t a_t ad(b_t) plus lambda times the Heisenberg scaling
/// (plus mu tau for n = 2). Rotation parameters are indexed a_{s_{k,l}}, k < l.
inline std::string latex_derivation_matrix(std::size_t n) {
    const SchrodingerBasis B(n);
    const LieAlgebra L = build_schrodinger(n);
    const std::size_t d = B.dim();

    using Sym = std::map<std::string, Rat>;
    std::vector<std::vector<Sym>> entries(d, std::vector<Sym>(d));
    auto accumulate = [&](const std::string& param, const Mat& m) {
        for (std::size_t r = 0; r < d; ++r)
            for (std::size_t c = 0; c < d; ++c)
                if (!is_zero(m(r, c))) {
                    entries[r][c][param] += m(r, c);
                    if (is_zero(entries[r][c][param])) entries[r][c].erase(param);
                }
    };
    for (std::size_t t = 0; t < d; ++t) {
        if (t == B.z) continue;  // ad(z) = 0: the center contributes no parameter
        accumulate("a_{" + detail::latex_basis_label(B, t) + "}", L.ad_basis(t));
    }
    accumulate("\\lambda", heisenberg_scaling(B).m);
    if (n == 2) accumulate("\\mu", tau().m);

    std::ostringstream os;
    os << "% general derivation of s_" << n
       << ": inner parameters a_(basis) plus the Heisenberg scaling \\lambda";
    if (n == 2) os << " and the exceptional \\mu";
    os << "\n% rotation parameter indices follow the k<l convention\n";
    os << "\\left(\\begin{array}{" << std::string(d, 'c') << "}\n";
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < d; ++c) {
            if (c) os << " & ";
            const Sym& s = entries[r][c];
            if (s.empty()) {
                os << "0";
            } else {
                bool leading = true;
                for (const auto& [sym, coeff] : s) {
                    os << detail::latex_term(coeff, sym, leading);
                    leading = false;
                }
            }
        }
        os << " \\\\\n";
    }
    os << "\\end{array}\\right)\n";
    return os.str();
}

/// Count of distinct symbolic parameters appearing in the general derivation
/// matrix of s_n (matches dim Der(s_n)).
inline std::size_t latex_parameter_count(std::size_t n) {
    const SchrodingerBasis B(n);
    // every ad(b_t) with t != z is nonzero, plus the scaling (plus tau for n=2)
    return (B.dim() - 1) + 1 + (n == 2 ? 1 : 0);
}

// ---------------------------------------------------------------------------
// files

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::runtime_error("cannot parse " + path + ": " + e.what());
    }
    return j;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
}

inline std::string file_stem(const std::string& path) {
    const auto slash = path.find_last_of("/\\");
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    const auto dot = base.find_last_of('.');
    return dot == std::string::npos ? base : base.substr(0, dot);
}

inline LieAlgebra load_algebra_file(const std::string& path, bool skip_jacobi = false) {
    return algebra_from_json(read_json_file(path), skip_jacobi, file_stem(path));
}

inline LinearMap load_map_file(const std::string& path) {
    return map_from_json(read_json_file(path));
}

}  // namespace liederiv
