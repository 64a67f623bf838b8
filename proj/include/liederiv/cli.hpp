#pragma once

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "liederiv/derivations.hpp"
#include "liederiv/io.hpp"
#include "liederiv/local_derivations.hpp"
#include "liederiv/proof_replay.hpp"
#include "liederiv/schrodinger.hpp"

namespace liederiv::cli {

namespace detail {

inline LieAlgebra make_target(const std::optional<std::size_t>& n, const std::string& file) {
    if (n && !file.empty())
        throw std::runtime_error("give either --n or --algebra, not both");
    if (n) return build_schrodinger(*n);
    if (!file.empty()) return load_algebra_file(file);
    throw std::runtime_error("one of --n or --algebra is required");
}

/// Merge the --algebra flag with an optional positional file argument.
inline std::string merge_file(const std::string& flag, const std::string& pos) {
    if (!flag.empty() && !pos.empty())
        throw std::runtime_error("algebra file given both positionally and via --algebra");
    return flag.empty() ? pos : flag;
}

inline Vec parse_point(const std::string& text, std::size_t dim) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : text) {
        if (ch == ',') {
            parts.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(ch))) {
            cur += ch;
        }
    }
    parts.push_back(cur);
    if (parts.size() != dim)
        throw std::runtime_error("point must list exactly " + std::to_string(dim) +
                                 " comma-separated scalars");
    Vec x;
    x.reserve(dim);
    for (const auto& p : parts) x.push_back(rat_from_string(p));
    return x;
}

}  // namespace detail

/// Run the command-line driver on `args` (without the program name).
/// Returns the process exit code: 0 on success, 1 on usage/input errors,
/// 2 when a verification (Jacobi, derivation, classification, replay) fails.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"exact-arithmetic derivations and local derivations of Schrodinger algebras"};
    app.name("liederiv");
    app.require_subcommand(1);

    std::function<int()> action;

    auto emit = [&out](const std::string& path, const std::string& content) {
        if (path.empty())
            out << content;
        else
            write_text_file(path, content);
    };

    // ---------------- algebra ----------------
    auto* alg = app.add_subcommand("algebra", "build and inspect bracket tables");
    alg->require_subcommand(1);

    std::optional<std::size_t> build_n;
    std::string build_family = "schrodinger", build_out;
    auto* alg_build = alg->add_subcommand("build", "emit the Schrodinger algebra s_n as json");
    alg_build->add_option("family", build_family, "algebra family (default: schrodinger)");
    alg_build->add_option("--n", build_n, "rank n of s_n")->required();
    alg_build->add_option("--out", build_out, "output file (default: stdout)");
    alg_build->callback([&] {
        action = [&]() -> int {
            if (build_family != "schrodinger")
                throw std::runtime_error("unknown algebra family: " + build_family);
            const LieAlgebra L = build_schrodinger(*build_n);
            emit(build_out, algebra_to_json(L).dump(2) + "\n");
            return 0;
        };
    });

    std::string check_file;
    auto* alg_check = alg->add_subcommand("check", "validate a bracket table file");
    alg_check->add_option("file", check_file, "algebra json file")->required();
    alg_check->callback([&] {
        action = [&]() -> int {
            const LieAlgebra L = load_algebra_file(check_file, /*skip_jacobi=*/true);
            const auto bad = L.jacobi_violations();
            if (bad.empty()) {
                out << "ok: " << L.name() << " is a Lie algebra of dim " << L.dim() << "\n";
                return 0;
            }
            err << "jacobi identity fails on " << bad.size() << " basis triple(s):\n";
            std::size_t shown = 0;
            for (const auto& [i, j, k] : bad) {
                if (shown++ == 5) {
                    err << "  ...\n";
                    break;
                }
                err << "  (" << L.labels()[i] << ", " << L.labels()[j] << ", " << L.labels()[k]
                    << ")\n";
            }
            return 2;
        };
    });

    std::optional<std::size_t> info_n;
    std::string info_file;
    auto* alg_info = alg->add_subcommand("info", "print summary data for an algebra");
    alg_info->add_option("--n", info_n, "rank n of s_n");
    alg_info->add_option("--algebra", info_file, "algebra json file");
    alg_info->callback([&] {
        action = [&]() -> int {
            const LieAlgebra L = detail::make_target(info_n, info_file);
            out << "algebra " << L.name() << "\n"
                << "  dim = " << L.dim() << "\n"
                << "  nonzero defining brackets = " << L.relations().size() << "\n"
                << "  dim center = " << L.center().dim() << "\n";
            if (auto B = detect_schrodinger(L))
                out << "  recognized as s_" << B->n << "\n";
            return 0;
        };
    });

    // ---------------- der ----------------
    auto* der = app.add_subcommand("der", "derivation spaces and the decomposition theorem");
    der->require_subcommand(1);

    std::optional<std::size_t> basis_n;
    std::string basis_file, basis_fmt = "text", basis_out;
    auto* der_basis = der->add_subcommand("basis", "compute a basis of the derivation space");
    der_basis->add_option("--n", basis_n, "rank n of s_n");
    der_basis->add_option("--algebra", basis_file, "algebra json file");
    der_basis->add_option("--format", basis_fmt, "output format")
        ->check(CLI::IsMember({"json", "text", "latex"}));
    der_basis->add_option("--out", basis_out, "output file (default: stdout)");
    der_basis->callback([&] {
        action = [&]() -> int {
            const LieAlgebra L = detail::make_target(basis_n, basis_file);
            if (basis_fmt == "latex") {
                const auto B = detect_schrodinger(L);
                if (!B)
                    throw std::runtime_error(
                        "latex output is only available for Schrodinger algebras");
                emit(basis_out, latex_derivation_matrix(B->n));
                return 0;
            }
            const DerSpace ds = derivation_space(L);
            if (basis_fmt == "json") {
                json j{{"algebra", L.name()},
                       {"dim", L.dim()},
                       {"dim_der", ds.dim()},
                       {"dim_inn", ds.inner.dim()},
                       {"outer_count", ds.outer.size()}};
                json basis = json::array();
                for (std::size_t k = 0; k < ds.dim(); ++k)
                    basis.push_back(map_to_json(ds.basis_map(k)));
                j["basis"] = std::move(basis);
                emit(basis_out, j.dump(2) + "\n");
            } else {
                std::ostringstream os;
                os << "derivation space of " << L.name() << ": dim " << ds.dim() << " (inner "
                   << ds.inner.dim() << ", outer complement " << ds.outer.size() << ")\n";
                emit(basis_out, os.str());
            }
            return 0;
        };
    });

    std::optional<std::size_t> thm_n;
    std::string thm_pos, thm_file, thm_fmt = "text", thm_out;
    auto* der_thm = der->add_subcommand(
        "verify-theorem", "check Der(s_n) = Inn(s_n) (+) span of the named outer derivations");
    der_thm->add_option("file", thm_pos, "algebra json file");
    der_thm->add_option("--n", thm_n, "rank n of s_n");
    der_thm->add_option("--algebra", thm_file, "algebra json file");
    der_thm->add_option("--format", thm_fmt, "output format")
        ->check(CLI::IsMember({"json", "text"}));
    der_thm->add_option("--out", thm_out, "output file (default: stdout)");
    der_thm->callback([&] {
        action = [&]() -> int {
            const LieAlgebra L = detail::make_target(thm_n, detail::merge_file(thm_file, thm_pos));
            const DecompositionReport rep = verify_outer_decomposition(L);
            if (thm_fmt == "json")
                emit(thm_out, decomposition_report_to_json(L.name(), rep).dump(2) + "\n");
            else
                emit(thm_out, decomposition_report_to_text(L.name(), rep));
            return rep.all_ok() ? 0 : 2;
        };
    });

    std::optional<std::size_t> cm_n;
    std::string cm_file, cm_map;
    auto* der_cm = der->add_subcommand("check-map", "test whether a linear map is a derivation");
    der_cm->add_option("--n", cm_n, "rank n of s_n");
    der_cm->add_option("--algebra", cm_file, "algebra json file");
    der_cm->add_option("--map", cm_map, "linear map json file")->required();
    der_cm->callback([&] {
        action = [&]() -> int {
            const LieAlgebra L = detail::make_target(cm_n, cm_file);
            const LinearMap D = load_map_file(cm_map);
            if (D.dim() != L.dim())
                throw std::runtime_error("map dimension does not match the algebra");
            const LeibnizVerdict verdict = is_derivation(L, D);
            if (verdict.ok) {
                out << "map is a derivation of " << L.name() << "\n";
                return 0;
            }
            const auto [i, j] = *verdict.violated;
            out << "map is NOT a derivation of " << L.name() << ": Leibniz fails at ("
                << L.labels()[i] << ", " << L.labels()[j] << ")\n";
            return 2;
        };
    });

    // ---------------- locder ----------------
    auto* loc = app.add_subcommand("locder", "local derivations");
    loc->require_subcommand(1);

    std::optional<std::size_t> cls_n;
    std::string cls_pos, cls_file, cls_fmt = "json", cls_out;
    std::uint64_t cls_seed = 42;
    std::size_t cls_stab = 5, cls_max = 200;
    auto* loc_cls = loc->add_subcommand(
        "classify", "decide whether every local derivation is a derivation");
    loc_cls->add_option("file", cls_pos, "algebra json file");
    loc_cls->add_option("--n", cls_n, "rank n of s_n");
    loc_cls->add_option("--algebra", cls_file, "algebra json file");
    loc_cls->add_option("--seed", cls_seed, "rng seed for sample points (default 42)");
    loc_cls->add_option("--stabilize", cls_stab, "stabilization window (default 5)");
    loc_cls->add_option("--max-samples", cls_max, "sample budget (default 200)");
    loc_cls->add_option("--format", cls_fmt, "output format")
        ->check(CLI::IsMember({"json", "text"}));
    loc_cls->add_option("--out", cls_out, "output file (default: stdout)");
    loc_cls->callback([&] {
        action = [&]() -> int {
            const LieAlgebra L = detail::make_target(cls_n, detail::merge_file(cls_file, cls_pos));
            const DerSpace ds = derivation_space(L);
            const LocDerReport rep = candidate_space(L, ds, cls_seed, cls_stab, cls_max);
            if (cls_fmt == "json")
                emit(cls_out, locder_report_to_json(rep).dump(2) + "\n");
            else
                emit(cls_out, locder_report_to_text(L, rep));
            return rep.status == LocDerStatus::ProvenEqual ? 0 : 2;
        };
    });

    std::optional<std::size_t> cert_n;
    std::string cert_file, cert_map, cert_point;
    auto* loc_cert = loc->add_subcommand(
        "certify", "find a derivation agreeing with a map at one point");
    loc_cert->add_option("--n", cert_n, "rank n of s_n");
    loc_cert->add_option("--algebra", cert_file, "algebra json file");
    loc_cert->add_option("--map", cert_map, "linear map json file")->required();
    loc_cert->add_option("--point", cert_point, "comma-separated coordinates of the point")
        ->required();
    loc_cert->callback([&] {
        action = [&]() -> int {
            const LieAlgebra L = detail::make_target(cert_n, cert_file);
            const LinearMap D = load_map_file(cert_map);
            if (D.dim() != L.dim())
                throw std::runtime_error("map dimension does not match the algebra");
            const Vec x = detail::parse_point(cert_point, L.dim());
            const DerSpace ds = derivation_space(L);
            const auto coeffs = certify_at(L, ds, D, x);
            if (!coeffs) {
                out << "no derivation agrees with the map at x = " << format_element(L, x)
                    << "\n";
                return 2;
            }
            out << "certified at x = " << format_element(L, x)
                << ": a derivation with Der-basis coefficients (";
            for (std::size_t k = 0; k < coeffs->size(); ++k)
                out << (k ? ", " : "") << rat_to_string((*coeffs)[k]);
            out << ") agrees there\n";
            return 0;
        };
    });

    std::optional<std::size_t> wit_n;
    std::string wit_file, wit_map;
    std::size_t wit_budget = 200;
    auto* loc_wit = loc->add_subcommand(
        "witness", "search for a point where a map leaves the bracket orbit");
    loc_wit->add_option("--n", wit_n, "rank n of s_n");
    loc_wit->add_option("--algebra", wit_file, "algebra json file");
    loc_wit->add_option("--map", wit_map, "linear map json file")->required();
    loc_wit->add_option("--budget", wit_budget, "point budget (default 200)");
    loc_wit->callback([&] {
        action = [&]() -> int {
            const LieAlgebra L = detail::make_target(wit_n, wit_file);
            const LinearMap D = load_map_file(wit_map);
            if (D.dim() != L.dim())
                throw std::runtime_error("map dimension does not match the algebra");
            const DerSpace ds = derivation_space(L);
            const auto x = witness_search(L, ds, D, wit_budget);
            if (x) {
                out << "witness: at x = " << format_element(L, *x)
                    << " the image leaves every derivation orbit of x\n";
                return 2;
            }
            out << "no witness found within budget " << wit_budget << "\n";
            return 0;
        };
    });

    // ---------------- replay ----------------
    auto* rep = app.add_subcommand("replay", "replay the normalization proof on a map");
    rep->require_subcommand(1);

    std::size_t rr_n = 0;
    std::string rr_map, rr_fmt = "text", rr_out;
    auto* rep_run = rep->add_subcommand("run", "normalize a derivation step by step");
    rep_run->add_option("--n", rr_n, "rank n of s_n")->required();
    rep_run->add_option("--map", rr_map, "linear map json file")->required();
    rep_run->add_option("--format", rr_fmt, "output format")
        ->check(CLI::IsMember({"json", "text"}));
    rep_run->add_option("--out", rr_out, "output file (default: stdout)");
    rep_run->callback([&] {
        action = [&]() -> int {
            const LieAlgebra L = build_schrodinger(rr_n);
            const LinearMap D = load_map_file(rr_map);
            if (D.dim() != L.dim())
                throw std::runtime_error("map dimension does not match the algebra");
            const DerSpace ds = derivation_space(L);
            const ProofTrace trace = replay(L, ds, D);
            if (rr_fmt == "json")
                emit(rr_out, trace_to_json(L, trace).dump(2) + "\n");
            else
                emit(rr_out, trace_to_text(L, trace));
            return trace.decomposition_valid ? 0 : 2;
        };
    });

    // ---------------- dispatch ----------------
    std::vector<std::string> argv_storage;
    argv_storage.reserve(args.size() + 1);
    argv_storage.push_back("liederiv");
    for (const auto& a : args) argv_storage.push_back(a);
    std::vector<const char*> argv;
    for (const auto& s : argv_storage) argv.push_back(s.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        return action ? action() : 0;
    } catch (const JacobiError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace liederiv::cli
