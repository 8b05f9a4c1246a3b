#pragma once

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "vbcalc/fixtures.hpp"
#include "vbcalc/specfile.hpp"

#include <CLI11.hpp>

namespace vbcalc::cli {

// Exit codes: 0 all checks pass, 1 some check failed, 2 parse/resolution error.
inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitError = 2;

struct Options {
    int degree_cap = 4;
    unsigned poly_cap = 16;
    std::uint64_t seed = 0;
    std::string format = "table";  // table | records
    std::string fixture;           // filter for the suite
    bool check_d2 = false;
};

/// One rendered report section (e.g. all checks of one target).
inline void print_report(std::ostream& out, const std::string& section,
                         const Report& rep, const Options& opt, double ms) {
    if (opt.format == "records") {
        for (const auto& c : rep.checks())
            out << section << "." << c.name << "\t" << (c.passed ? "pass" : "fail")
                << "\t" << c.witness << "\n";
    } else {
        out << "== " << section << "\n";
        for (const auto& c : rep.checks()) {
            out << "  [" << (c.passed ? "PASS" : "FAIL") << "] " << c.name;
            if (!c.passed) out << " -- " << c.witness;
            out << "\n";
        }
        out << "  (" << rep.checks().size() << " checks, "
            << static_cast<long>(ms) << " ms)\n";
    }
}

class Timer {
public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double ms() const {
        return std::chrono::duration<double, std::milli>(
                   std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

inline SpecDocument load_document(const std::string& path, const Options& opt) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return SpecParser(opt.poly_cap, opt.degree_cap).parse(ss.str());
}

/// validate: run every applicable structural check in the document.
inline int cmd_validate(const std::string& path, const Options& opt,
                        std::ostream& out, std::ostream& err) {
    SpecDocument doc;
    try {
        doc = load_document(path, opt);
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return kExitError;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
    bool all = true;
    for (const auto& entry : doc.order) {
        auto space = entry.find(' ');
        std::string kind = entry.substr(0, space);
        std::string name = entry.substr(space + 1);
        Timer t;
        Report rep;
        if (kind == "algebroid") {
            const auto& A = *doc.algebroids.at(name);
            rep.merge(check_jacobi(A));
            rep.merge(check_anchor_compat(A));
        } else if (kind == "connection") {
            const auto& c = doc.connections.at(name);
            rep.merge(check_flatness(*doc.algebroids.at(c.algebroid), c.connection));
        } else if (kind == "vb") {
            const auto& W = doc.vbs.at(name).vb;
            rep.merge(validate_vb_axioms(W));
            rep.merge(check_jacobi(W.total()));
            rep.merge(check_anchor_compat(W.total()));
        } else {
            continue;  // cochain/triple/imsection blocks carry no structural checks
        }
        all = all && rep.all_passed();
        print_report(out, kind + " " + name, rep, opt, t.ms());
    }
    return all ? kExitPass : kExitFail;
}

/// diff: print the differential of a named cochain in canonical form.
inline int cmd_diff(const std::string& path, const std::string& cochain_name,
                    const Options& opt, std::ostream& out, std::ostream& err) {
    SpecDocument doc;
    try {
        doc = load_document(path, opt);
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return kExitError;
    }
    auto it = doc.cochains.find(cochain_name);
    if (it == doc.cochains.end()) {
        err << "error: unknown cochain '" << cochain_name << "'\n";
        return kExitError;
    }
    const DefCochain& c = it->second;
    if (static_cast<int>(c.degree()) + 1 > opt.degree_cap) {
        err << "error: differential would exceed the degree cap of "
            << opt.degree_cap << "\n";
        return kExitError;
    }
    DefCochain dc = differential(c);
    for (const auto& [t, v] : dc.frame_values()) {
        for (const auto& p : v.coefficients)
            if (p.total_degree() > opt.poly_cap) {
                err << "error: output exceeds the polynomial degree cap\n";
                return kExitError;
            }
    }
    const FrameAlgebroid& A = c.parent();
    out << "cochain " << cochain_name << ": degree " << c.degree() << " -> "
        << dc.degree() << "\n";
    auto tuple_str = [&](const std::vector<int>& t) {
        std::string s = "[";
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (i) s += ", ";
            s += A.frame_name(t[i]);
        }
        return s + "]";
    };
    for (const auto& [t, v] : dc.frame_values())
        out << "value " << tuple_str(t) << " = " << v.to_string(A.frame_names())
            << "\n";
    for (const auto& [t, v] : dc.symbol_values())
        out << "symbol " << tuple_str(t) << " = " << v.to_string() << "\n";
    if (opt.check_d2) {
        if (static_cast<int>(dc.degree()) + 1 > opt.degree_cap) {
            err << "error: d2 check would exceed the degree cap\n";
            return kExitError;
        }
        bool ok = differential(dc).is_zero();
        out << "d2=0: " << (ok ? "pass" : "fail") << "\n";
        if (!ok) return kExitFail;
    }
    return kExitPass;
}

/// check-im: run the applicable IM conditions for a triple or imsection block.
inline int cmd_check_im(const std::string& path, const std::string& target,
                        const Options& opt, std::ostream& out, std::ostream& err) {
    SpecDocument doc;
    try {
        doc = load_document(path, opt);
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return kExitError;
    }
    Timer t;
    if (auto it = doc.triples.find(target); it != doc.triples.end()) {
        const SplitVB& W = doc.vbs.at(it->second.vb).vb;
        Report rep;
        try {
            rep = check_im_triple(W, it->second.triple);
        } catch (const Error& e) {
            err << "error: " << e.what() << "\n";
            return kExitError;
        }
        print_report(out, "triple " + target, rep, opt, t.ms());
        return rep.all_passed() ? kExitPass : kExitFail;
    }
    if (auto it = doc.imsections.find(target); it != doc.imsections.end()) {
        const auto& A = *doc.algebroids.at(it->second.algebroid);
        const auto& conn = doc.connections.at(it->second.connection);
        Report rep;
        try {
            rep.merge(im_section_pde_check(A, conn.connection, conn.bundle_rank,
                                           it->second.coords));
            auto A_ptr = doc.algebroids.at(it->second.algebroid);
            rep.merge(trivial_core_im_check(
                A, conn.connection, delta_A_of_coords(A_ptr, it->second.coords),
                delta_E_of_coords(it->second.coords)));
        } catch (const Error& e) {
            err << "error: " << e.what() << "\n";
            return kExitError;
        }
        print_report(out, "imsection " + target, rep, opt, t.ms());
        return rep.all_passed() ? kExitPass : kExitFail;
    }
    err << "error: no triple or imsection named '" << target << "'\n";
    return kExitError;
}

/// Property battery over the built-in fixture library.
inline int cmd_suite(const Options& opt, std::ostream& out, std::ostream& err) {
    (void)err;
    bool all = true;
    auto want = [&](const std::string& name) {
        return opt.fixture.empty() || opt.fixture == name;
    };
    std::mt19937_64 rng(opt.seed);

    for (const auto& fx : fixtures::algebroid_fixtures()) {
        if (!want(fx.name)) continue;
        Timer t;
        Report rep;
        rep.merge(check_jacobi(fx.algebroid));
        rep.merge(check_anchor_compat(fx.algebroid));
        auto A = std::make_shared<const FrameAlgebroid>(fx.algebroid);
        // d over d vanishes on seeded random cochains.
        for (std::size_t deg = 0; deg <= 2; ++deg) {
            DefCochain c(deg, A);
            for (const auto& tu : increasing_tuples(A->rank(), deg)) {
                Section s = A->zero_section();
                for (std::size_t i = 0; i < A->rank(); ++i)
                    s.coefficients[i] = random_polynomial(rng, A->chart(), 2);
                c.set_frame_value(tu, s);
            }
            if (deg >= 1)
                for (const auto& tu : increasing_tuples(A->rank(), deg - 1)) {
                    std::vector<Polynomial> comps;
                    for (std::size_t i = 0; i < A->chart().dim(); ++i)
                        comps.push_back(random_polynomial(rng, A->chart(), 2));
                    c.set_symbol_value(tu, PolyVector(A->chart(), std::move(comps)));
                }
            bool ok = differential(differential(c)).is_zero();
            ok ? rep.add_pass("d2_zero(degree " + std::to_string(deg) + ")")
               : rep.add_fail("d2_zero(degree " + std::to_string(deg) + ")", "");
            // Cocycle equivalence on degree 1.
            if (deg == 1) {
                bool lhs = is_algebroid_derivation(c).all_passed();
                bool rhs = differential(c).is_zero();
                (lhs == rhs)
                    ? rep.add_pass("cocycle_equivalence")
                    : rep.add_fail("cocycle_equivalence", "verdicts differ");
            }
        }
        all = all && rep.all_passed();
        print_report(out, "fixture " + fx.name, rep, opt, t.ms());
    }

    for (const auto& fx : fixtures::vb_fixtures()) {
        if (!want(fx.name)) continue;
        Timer t;
        Report rep;
        const SplitVB& W = fx.vb;
        rep.merge(validate_vb_axioms(W));
        rep.merge(check_jacobi(W.total()));
        rep.merge(check_anchor_compat(W.total()));
        FatAlgebroid fat = fat_algebroid(W);
        rep.merge(check_jacobi(fat.algebroid()));
        // Euler eigenvalues.
        BundleDerivation eu = euler_derivation(W);
        bool euler_ok = true;
        for (std::size_t i = 0; i < W.total().rank(); ++i) {
            Section img = derivation_apply(eu, W.total().frame_section(i));
            if (W.is_core_generator(i)
                    ? !(img == -W.total().frame_section(i))
                    : !img.is_zero())
                euler_ok = false;
        }
        euler_ok ? rep.add_pass("euler_eigenvalues")
                 : rep.add_fail("euler_eigenvalues", "wrong eigenvalue");
        // Internal derivations are linear IM cochains.
        Section g = Section::zero(W.base().chart(), fat.rank());
        for (std::size_t i = 0; i < fat.rank(); ++i)
            g.coefficients[i] = random_polynomial(rng, W.base().chart(), 1);
        DefCochain d = internal_derivation(W, fat, g);
        bool internal_ok = classify_cochain_linearity(W, d).linear &&
                           is_algebroid_derivation(d).all_passed();
        internal_ok ? rep.add_pass("internal_derivation_im")
                    : rep.add_fail("internal_derivation_im", "not IM");
        IMTriple tr = internal_triple(W, fat, g);
        check_im_triple(W, fat, tr).all_passed()
            ? rep.add_pass("internal_triple")
            : rep.add_fail("internal_triple", "triple conditions fail");
        all = all && rep.all_passed();
        print_report(out, "vb " + fx.name, rep, opt, t.ms());
    }

    for (const auto& fx : fixtures::trivial_core_fixtures()) {
        if (!want(fx.name)) continue;
        Timer t;
        Report rep =
            theorem_equivalence_suite(fx.algebroid, fx.nabla, fx.n, 25, opt.seed);
        all = all && rep.all_passed();
        print_report(out, "equivalence " + fx.name, rep, opt, t.ms());
    }

    // Deliberately broken fixtures must fail their checks.
    if (want("broken")) {
        Timer t;
        Report rep;
        !check_jacobi(fixtures::broken_jacobi()).all_passed()
            ? rep.add_pass("broken_jacobi_detected")
            : rep.add_fail("broken_jacobi_detected", "not detected");
        !check_anchor_compat(fixtures::broken_anchor()).all_passed()
            ? rep.add_pass("broken_anchor_detected")
            : rep.add_fail("broken_anchor_detected", "not detected");
        !check_flatness(fixtures::abelian(2), fixtures::nonflat_ab2()).all_passed()
            ? rep.add_pass("nonflat_detected")
            : rep.add_fail("nonflat_detected", "not detected");
        !check_jacobi(build_trivial_core_unchecked(fixtures::abelian(2), 2,
                                                   fixtures::nonflat_ab2())
                          .total())
                .all_passed()
            ? rep.add_pass("nonflat_breaks_jacobi")
            : rep.add_fail("nonflat_breaks_jacobi", "not detected");
        !validate_vb_axioms(fixtures::broken_vb_corecore()).all_passed()
            ? rep.add_pass("broken_vb_corecore_detected")
            : rep.add_fail("broken_vb_corecore_detected", "not detected");
        !validate_vb_axioms(fixtures::broken_vb_anchor()).all_passed()
            ? rep.add_pass("broken_vb_anchor_detected")
            : rep.add_fail("broken_vb_anchor_detected", "not detected");
        all = all && rep.all_passed();
        print_report(out, "broken fixtures", rep, opt, t.ms());
    }
    return all ? kExitPass : kExitFail;
}

/// Entry point shared by the binary and the tests.
inline int run(const std::vector<std::string>& args, std::ostream& out,
               std::ostream& err) {
    CLI::App app{"exact symbolic calculus for Lie algebroid deformation "
                 "complexes, VB-algebroids and IM derivations"};
    app.require_subcommand(1);
    Options opt;
    app.add_option("--degree-cap", opt.degree_cap, "maximum cochain degree")
        ->capture_default_str();
    app.add_option("--poly-cap", opt.poly_cap, "maximum polynomial total degree")
        ->capture_default_str();
    app.add_option("--seed", opt.seed, "seed for randomized batteries")
        ->capture_default_str();
    app.add_option("--format", opt.format, "report format: table | records")
        ->check(CLI::IsMember({"table", "records"}))
        ->capture_default_str();

    std::string file, target;
    auto* validate = app.add_subcommand("validate", "run structural checks on a file");
    validate->add_option("file", file)->required();

    auto* diff = app.add_subcommand("diff", "print the differential of a cochain");
    diff->add_option("file", file)->required();
    diff->add_option("cochain", target)->required();
    diff->add_flag("--check-d2", opt.check_d2, "also verify d(d c) = 0");

    auto* checkim = app.add_subcommand("check-im", "check IM conditions of a target");
    checkim->add_option("file", file)->required();
    checkim->add_option("target", target)->required();

    auto* suite = app.add_subcommand("suite", "run the fixture property battery");
    suite->add_option("--fixture", opt.fixture, "restrict to one fixture");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kExitPass;
        }
        err << "usage error: " << e.what() << "\n";
        return kExitError;
    }

    try {
        if (validate->parsed()) return cmd_validate(file, opt, out, err);
        if (diff->parsed()) return cmd_diff(file, target, opt, out, err);
        if (checkim->parsed()) return cmd_check_im(file, target, opt, out, err);
        if (suite->parsed()) return cmd_suite(opt, out, err);
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return kExitError;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}

}  // namespace vbcalc::cli
