#ifndef ARCOH_CLI_HPP
#define ARCOH_CLI_HPP

// In-process command-line front end. run_cli parses the arguments, runs one
// subcommand, writes the JSON (or CSV) report to `out` and log lines to
// `err`, and returns the process exit code:
//   0 success, 1 usage, 2 invalid input or failed invariant, 3 budget.

#include "arcoh/arakelov.hpp"
#include "arcoh/errors.hpp"
#include "arcoh/ghost.hpp"
#include "arcoh/io.hpp"
#include "arcoh/numfield.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace arcoh::cli {

enum ExitCode : int { ok = 0, usage = 1, invalid = 2, budget = 3 };

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string field = "rational";
    std::string divisor;
    std::string ghost;
    double tol = 1e-9;
    std::string format = "json";
    std::uint64_t budget = default_enumeration_budget;
    bool timing = false;
    bool unchecked_field = false;
    std::string what = "both";
    double s_re = 0.5;
    double s_im = 0.0;
    double t_min = 0.0;
    double t_max = 0.0;
    long long steps = 1;
    std::string ghost_action;
    std::vector<std::string> generators;
};

inline std::string fnv1a_hex(const std::string& data)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

inline Json cohomology_json(const CohomologyValue& v)
{
    return Json{{"value", v.value}, {"error_bound", v.tail_bound}, {"points_enumerated", v.points_enumerated}};
}

inline Json complex_json(Complex z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

inline Json complex_list_json(const std::vector<Complex>& zs)
{
    Json a = Json::array();
    for (auto z : zs)
        a.push_back(complex_json(z));
    return a;
}

class Runner {
public:
    Runner(const Options& o, std::ostream& out, std::ostream& err) : o_(o), out_(out), err_(err) {}

    int run(const std::string& command)
    {
        const auto start = std::chrono::steady_clock::now();
        report_["command"] = command;
        int code = ok;
        if (command == "field-info")
            code = field_info();
        else if (command == "h0" || command == "h1")
            code = cohomology(command);
        else if (command == "verify")
            code = verify();
        else if (command == "zeta-sweep")
            code = zeta_sweep();
        else if (command == "ghost")
            code = ghost();
        else
            throw UsageError("unknown command '" + command + "'");
        if (csv_)
            return code;
        report_["inputs_digest"] = fnv1a_hex(digest_input_);
        report_["passed"] = code == ok;
        if (o_.timing) {
            const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
            report_["wall_time_s"] = dt.count();
        }
        out_ << report_.dump(2) << '\n';
        return code;
    }

private:
    NumberField field()
    {
        digest_input_ += "field:" + o_.field + "\n";
        if (std::filesystem::exists(o_.field))
            digest_input_ += read_text_file(o_.field);
        return load_field(o_.field, !o_.unchecked_field);
    }

    ArakelovDivisor divisor(const NumberField& f)
    {
        if (o_.divisor.empty()) {
            digest_input_ += "divisor:zero\n";
            return ArakelovDivisor::zero(f);
        }
        digest_input_ += "divisor:" + read_text_file(o_.divisor) + "\n";
        return load_divisor(f, o_.divisor);
    }

    CohomologyOptions cohomology_options() const { return {o_.budget}; }

    void check_tol() const
    {
        if (!(o_.tol > 0.0) || !std::isfinite(o_.tol))
            throw UsageError("--tol must be a positive number");
    }

    int field_info()
    {
        const NumberField f = field();
        const double expected = std::sqrt(f.abs_discriminant().convert_to<double>());
        const double covol = f.unit_covolume();
        const double rel = std::abs(covol - expected) / expected;
        const bool covol_ok = rel <= 1e-8;
        Json r;
        r["name"] = f.name();
        r["degree"] = f.degree();
        r["signature"] = {f.r1(), f.r2()};
        r["abs_discriminant"] = f.abs_discriminant().str();
        r["different"] = ideal_to_json(f.different());
        r["different_norm"] = ideal_norm(f.different()).str();
        r["degree_canonical"] = degree(f, canonical_divisor(f));
        r["covolume_check"] = {{"computed", covol}, {"expected", expected}, {"relative_error", rel},
                               {"tolerance", 1e-8}, {"passed", covol_ok}};
        report_["result"] = std::move(r);
        err_ << "arcoh: field " << f.name() << " covolume check " << (covol_ok ? "passed" : "FAILED") << '\n';
        return covol_ok ? ok : invalid;
    }

    int cohomology(const std::string& which)
    {
        check_tol();
        const NumberField f = field();
        const ArakelovDivisor d = divisor(f);
        const CohomologyValue v = which == "h0" ? h0(f, d, o_.tol, cohomology_options())
                                                : h1(f, d, o_.tol, cohomology_options());
        Json r = cohomology_json(v);
        r["tolerance"] = o_.tol;
        r["degree"] = degree(f, d);
        r["field"] = f.name();
        report_["result"] = std::move(r);
        err_ << "arcoh: " << which << " enumerated " << v.points_enumerated << " points\n";
        return ok;
    }

    int verify()
    {
        check_tol();
        if (o_.what != "rr" && o_.what != "duality" && o_.what != "both")
            throw UsageError("--what must be rr, duality or both");
        const NumberField f = field();
        const ArakelovDivisor d = divisor(f);
        bool all = true;
        Json r;
        r["field"] = f.name();
        r["degree"] = degree(f, d);
        r["tolerance"] = o_.tol;
        if (o_.what != "duality") {
            const auto rr = verify_riemann_roch(f, d, o_.tol, cohomology_options());
            r["riemann_roch"] = {{"h0_D", cohomology_json(rr.h0_d)},
                                 {"h0_K_minus_D", cohomology_json(rr.h0_k_minus_d)},
                                 {"lhs", rr.lhs},
                                 {"rhs", rr.rhs},
                                 {"delta", rr.delta},
                                 {"passed", rr.passed}};
            all = all && rr.passed;
            err_ << "arcoh: riemann-roch delta " << rr.delta << (rr.passed ? " ok" : " FAILED") << '\n';
        }
        if (o_.what != "rr") {
            const auto sd = verify_serre_duality(f, d, o_.tol, cohomology_options());
            r["serre_duality"] = {{"h1_D", cohomology_json(sd.h1_direct)},
                                  {"h0_K_minus_D", cohomology_json(sd.h0_dual)},
                                  {"delta", sd.delta},
                                  {"passed", sd.passed}};
            all = all && sd.passed;
            err_ << "arcoh: serre duality delta " << sd.delta << (sd.passed ? " ok" : " FAILED") << '\n';
        }
        report_["result"] = std::move(r);
        return all ? ok : invalid;
    }

    int zeta_sweep()
    {
        check_tol();
        if (o_.steps < 1)
            throw UsageError("--steps must be at least 1");
        if (o_.format != "json" && o_.format != "csv")
            throw UsageError("--format must be json or csv");
        const NumberField f = field();
        std::vector<double> grid;
        const long long m = o_.steps - 1;
        for (long long i = 0; i <= m; ++i)
            grid.push_back(m == 0 ? o_.t_min
                                  : (o_.t_min * static_cast<double>(m - i) + o_.t_max * static_cast<double>(i)) /
                                        static_cast<double>(m));
        const Complex s(o_.s_re, o_.s_im);
        digest_input_ += "s:" + std::to_string(o_.s_re) + "," + std::to_string(o_.s_im) + "\n";
        const auto rows = zeta_integrand_sweep(f, s, grid, o_.tol, cohomology_options());
        if (o_.format == "csv") {
            csv_ = true;
            out_ << "t,re,im,h0,h1\n";
            char buf[160];
            for (const auto& row : rows) {
                std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", row.t, row.value.real(),
                              row.value.imag(), row.h0, row.h1);
                out_ << buf;
            }
            return ok;
        }
        Json table = Json::array();
        for (const auto& row : rows)
            table.push_back({{"t", row.t}, {"value", complex_json(row.value)}, {"h0", row.h0}, {"h1", row.h1}});
        report_["result"] = {{"s", complex_json(s)}, {"tolerance", o_.tol}, {"rows", std::move(table)}};
        return ok;
    }

    std::vector<std::size_t> generator_indices(const FiniteAbelianGroup& g) const
    {
        std::vector<std::size_t> out;
        for (const auto& text : o_.generators) {
            std::vector<int> comps;
            std::stringstream ss(text);
            std::string piece;
            while (std::getline(ss, piece, ',')) {
                try {
                    std::size_t used = 0;
                    comps.push_back(std::stoi(piece, &used));
                    if (used != piece.size())
                        throw std::invalid_argument(piece);
                } catch (const std::exception&) {
                    throw UsageError("--gen expects comma-separated integers, got '" + text + "'");
                }
            }
            if (comps.size() != g.rank())
                throw UsageError("--gen '" + text + "' must have " + std::to_string(g.rank()) + " components");
            out.push_back(g.index(comps));
        }
        return out;
    }

    static Json check_json(const GhostCheckReport& c)
    {
        Json j{{"passed", c.passed}};
        if (!c.passed)
            j["failing_invariant"] = c.failing_invariant, j["detail"] = c.detail;
        j["spectrum"] = complex_list_json(c.spectrum);
        return j;
    }

    int ghost()
    {
        const std::string& act = o_.ghost_action;
        if (act != "check" && act != "dual" && act != "quotient" && act != "assoc")
            throw UsageError("ghost action must be check, dual, quotient or assoc");
        if (o_.ghost.empty())
            throw UsageError("ghost requires --ghost FILE");
        digest_input_ += "ghost:" + read_text_file(o_.ghost) + "\n";
        const GhostDescriptor desc = load_ghost(o_.ghost);
        const FiniteAbelianGroup& g = desc.group;
        Json r;
        r["cyclic_orders"] = g.orders();
        r["order"] = g.order();
        r["log_order"] = std::log(static_cast<double>(g.order()));
        const auto gens = generator_indices(g);

        if (act == "assoc") {
            ConvolutionStructure s = desc.u && desc.mu ? ConvolutionStructure::mixed(g, *desc.u, *desc.mu)
                                     : desc.u          ? ConvolutionStructure(GhostSpaceFirstKind(g, *desc.u))
                                                       : ConvolutionStructure(GhostSpaceSecondKind(g, *desc.mu));
            const auto a = check_associativity(s);
            r["kind"] = desc.u && desc.mu ? "mixed" : desc.u ? "first" : "second";
            r["max_associativity_error"] = a.max_associativity_error;
            r["max_commutativity_error"] = a.max_commutativity_error;
            r["tolerance"] = 1e-11;
            if (a.counterexample)
                r["counterexample"] = *a.counterexample;
            r["passed"] = a.passed;
            report_["result"] = std::move(r);
            return a.passed ? ok : invalid;
        }

        if (!desc.u) {
            if (act != "check")
                throw UsageError("ghost " + act + " needs a first-kind descriptor with 'u'");
            const auto c = check_second_kind(g, *desc.mu);
            r["kind"] = "second";
            r["check"] = check_json(c);
            if (c.passed)
                r["dimension"] = dim_second(GhostSpaceSecondKind(g, *desc.mu));
            report_["result"] = std::move(r);
            return c.passed ? ok : invalid;
        }

        const auto c = check_first_kind(g, *desc.u);
        r["kind"] = "first";
        r["check"] = check_json(c);
        if (!c.passed) {
            report_["result"] = std::move(r);
            err_ << "arcoh: first-kind check failed: " << c.failing_invariant << '\n';
            return invalid;
        }
        const GhostSpaceFirstKind s(g, *desc.u);
        r["dimension"] = dim_first(s);
        if (act == "check") {
            r["check"]["stabilizer"] = c.stabilizer;
            r["check"]["stabilizer_is_subgroup"] = c.stabilizer_is_subgroup;
            r["check"]["constant_on_cosets"] = c.constant_on_cosets;
            r["check"]["max_u"] = c.max_value;
        } else if (act == "dual") {
            const auto dual = dual_ghost(s);
            r["dual_measure"] = dual.mu();
            r["dual_dimension"] = dim_second(dual);
            r["dimension_difference"] = dim_first(s) - dim_second(dual);
        } else if (gens.empty()) {
            const auto q = quotient_by_ghost(s);
            r["quotient_measure"] = q.mu();
            r["quotient_dimension"] = dim_second(q);
            r["additivity_residual"] = std::log(static_cast<double>(g.order())) - dim_first(s) - dim_second(q);
        } else {
            const auto sq = sub_quotient_first(s, gens);
            r["subgroup"] = sq.subgroup;
            r["quotient_orders"] = sq.groups.quotient.orders();
            r["projection"] = sq.groups.projection;
            r["v"] = sq.v;
            r["v_check"] = check_json(sq.check);
            r["dimension_sub"] = sq.dim_sub;
            r["dimension_quotient"] = sq.dim_quotient;
            r["additivity_residual"] = sq.dim_total - sq.dim_sub - sq.dim_quotient;
            if (!sq.check.passed) {
                report_["result"] = std::move(r);
                return invalid;
            }
            const auto ds = dual_short_exact_sequence(s, gens);
            r["dual_sequence"] = {{"annihilator", ds.annihilator},
                                  {"dual_quotient_measure", ds.dual_quotient.mu()},
                                  {"dual_sub_orders", ds.restriction.quotient.orders()},
                                  {"dual_sub_measure", ds.dual_sub.mu()},
                                  {"dimension_dual_quotient", dim_second(ds.dual_quotient)},
                                  {"dimension_dual_total", dim_second(ds.dual_total)},
                                  {"dimension_dual_sub", dim_second(ds.dual_sub)}};
        }
        report_["result"] = std::move(r);
        return ok;
    }

    const Options& o_;
    std::ostream& out_;
    std::ostream& err_;
    Json report_ = Json::object();
    std::string digest_input_;
    bool csv_ = false;
};

inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Arithmetic cohomology of Arakelov divisors and finite ghost-spaces", "arcoh"};
    app.require_subcommand(1);
    Options o;

    auto add_field = [&](CLI::App* c) {
        c->add_option("--field", o.field, "rational | quadratic:<d> | descriptor file")->capture_default_str();
        c->add_flag("--unchecked-field", o.unchecked_field, "skip custom-descriptor cross-checks");
    };
    auto add_common = [&](CLI::App* c) {
        c->add_option("--tol", o.tol, "tolerance on h-values")->capture_default_str();
        c->add_option("--budget", o.budget, "enumeration point cap")->capture_default_str();
        c->add_option("--format", o.format, "json | csv")->capture_default_str();
        c->add_flag("--timing", o.timing, "include wall time in the report");
    };

    auto* fi = app.add_subcommand("field-info", "field invariants and covolume self-check");
    add_field(fi);
    add_common(fi);
    for (const char* name : {"h0", "h1"}) {
        auto* c = app.add_subcommand(name, std::string(name) + " of a divisor");
        add_field(c);
        add_common(c);
        c->add_option("--divisor", o.divisor, "divisor descriptor file (default: zero divisor)");
    }
    auto* ve = app.add_subcommand("verify", "Riemann-Roch and Serre duality checks");
    add_field(ve);
    add_common(ve);
    ve->add_option("--divisor", o.divisor, "divisor descriptor file (default: zero divisor)");
    ve->add_option("--what", o.what, "rr | duality | both")->capture_default_str();
    auto* ze = app.add_subcommand("zeta-sweep", "zeta integrand over degrees t on Q");
    add_field(ze);
    add_common(ze);
    ze->add_option("--s", o.s_re, "real part of s")->capture_default_str();
    ze->add_option("--s-imag", o.s_im, "imaginary part of s")->capture_default_str();
    ze->add_option("--t-min", o.t_min)->capture_default_str();
    ze->add_option("--t-max", o.t_max)->capture_default_str();
    ze->add_option("--steps", o.steps, "number of grid points")->capture_default_str();
    auto* gh = app.add_subcommand("ghost", "finite ghost-space checks");
    gh->add_option("action", o.ghost_action, "check | dual | quotient | assoc")->required();
    gh->add_option("--ghost", o.ghost, "ghost descriptor file");
    gh->add_option("--gen", o.generators, "subgroup generator as comma-separated components (repeatable)");
    gh->add_option("--format", o.format)->capture_default_str();
    gh->add_flag("--timing", o.timing);

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "arcoh: " << e.what() << '\n';
        return usage;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        if (o.format != "json" && !(o.format == "csv" && command == "zeta-sweep"))
            throw UsageError("--format csv is only available for zeta-sweep");
        Runner runner(o, out, err);
        return runner.run(command);
    } catch (const UsageError& e) {
        err << "arcoh: usage: " << e.what() << '\n';
        return usage;
    } catch (const EnumerationBudgetExceeded& e) {
        err << "arcoh: EnumerationBudgetExceeded: " << e.what() << '\n';
        return budget;
    } catch (const ToleranceUnreachable& e) {
        err << "arcoh: ToleranceUnreachable: " << e.what() << '\n';
        return budget;
    } catch (const DescriptorInconsistent& e) {
        err << "arcoh: DescriptorInconsistent (" << e.invariant() << "): " << e.what() << '\n';
        return invalid;
    } catch (const Error& e) {
        err << "arcoh: " << e.what() << '\n';
        return invalid;
    }
}

} // namespace arcoh::cli

#endif // ARCOH_CLI_HPP
