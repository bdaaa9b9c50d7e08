#include "springerlab/cli.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "springerlab/battery.hpp"
#include "springerlab/errors.hpp"
#include "springerlab/invariants.hpp"
#include "springerlab/lattice.hpp"
#include "springerlab/rootdata.hpp"

namespace springerlab {

namespace {

using json = nlohmann::json;

struct RunConfig {
    std::string command;
    int p = 0;
    int unram = 1;
    std::string eisenstein;
    std::string matrix;
    std::string charpoly;
    std::optional<int> window;
    int extensions = 4;
    bool extensions_set = false;
    std::string level = "hyperspecial";
    std::optional<int> coset;
    std::string fiber = "lie";
    std::string out;
    int jobs = 1;
    std::string format;
    std::string criteria;
    std::uint64_t seed = 0;
    std::vector<std::string> argv;

    json to_json() const {
        json j;
        j["command"] = command;
        j["argv"] = argv;
        j["seed"] = seed;
        if (command == "tables" || command == "suite") {
            j["jobs"] = jobs;
            if (!criteria.empty()) j["criteria"] = criteria;
            return j;
        }
        j["p"] = p;
        j["unram"] = unram;
        j["eisenstein"] = eisenstein.empty() ? json(nullptr) : json(eisenstein);
        j["matrix"] = matrix.empty() ? json(nullptr) : json(matrix);
        j["charpoly"] = charpoly.empty() ? json(nullptr) : json(charpoly);
        j["window"] = window ? json(*window) : json(nullptr);
        j["extensions"] = extensions;
        j["level"] = level;
        j["coset"] = coset ? json(*coset) : json(nullptr);
        j["fiber"] = fiber;
        return j;
    }
};

struct Verdict {
    json result;
    bool pass = true;
};

std::string utc_now() {
    std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

LocalField make_field(const RunConfig& c) {
    if (c.p < 2) throw ParseError("--p is required");
    if (!c.eisenstein.empty()) return LocalField::parse(c.p, c.unram, c.eisenstein);
    return LocalField::unramified(c.p, c.unram);
}

Mat make_element(const RunConfig& c, const LocalField& F) {
    if (c.matrix.empty() == c.charpoly.empty()) throw ParseError("exactly one of --matrix and --charpoly is required");
    if (!c.matrix.empty()) return Mat::parse(F, c.matrix, F.max_precision());
    return Mat::companion(IntPoly::parse(F, c.charpoly, F.max_precision()));
}

ConjugacyInvariants invariants_of(const RunConfig& c, const LocalField& F) {
    if (!c.charpoly.empty() && c.matrix.empty()) return compute_invariants(IntPoly::parse(F, c.charpoly, F.max_precision()));
    return compute_invariants(make_element(c, F));
}

void check_window_policy(int N, std::optional<int> pred) {
    if (pred && N < 2 * *pred + 2)
        throw DomainError("window policy: window " + std::to_string(N) + " is below 2*" + std::to_string(*pred) + "+2");
}

FiberSpec fiber_spec(const RunConfig& c, const Mat& g, const ConjugacyInvariants& inv, std::optional<int>& pred) {
    FiberSpec s;
    s.gamma = g;
    if (c.fiber == "lie") {
        s.kind = FiberSpec::Kind::lie;
        pred = inv.dim_lie_pred;
    } else if (c.fiber == "group") {
        s.kind = FiberSpec::Kind::group;
        if (!inv.kappa) throw DomainError("group fiber of a non-invertible element");
        s.coset = c.coset.value_or(*inv.kappa);
        pred = inv.dim_grp_pred;
        // The prediction is for the coset κ only.
        if (s.coset != *inv.kappa) pred.reset();
    } else {
        throw ParseError("--fiber must be lie or group");
    }
    s.level = parse_level(c.level);
    if (c.window) {
        check_window_policy(*c.window, pred);
        s.window = *c.window;
    } else {
        s.window = default_window(pred.value_or(0));
    }
    return s;
}

Verdict cmd_invariants(const RunConfig& c) {
    auto F = make_field(c);
    auto inv = invariants_of(c, F);
    return {to_json(inv), true};
}

Verdict cmd_dimension(const RunConfig& c) {
    auto F = make_field(c);
    Mat g = make_element(c, F);
    auto inv = compute_invariants(g);
    std::optional<int> pred;
    FiberSpec s = fiber_spec(c, g, inv, pred);
    auto prof = count_profile(s, c.extensions, pred, c.jobs);
    json r;
    r["invariants"] = to_json(inv);
    r["fiber"] = c.fiber;
    r["level"] = to_string(s.level);
    if (s.kind == FiberSpec::Kind::group) r["coset"] = s.coset;
    r["profile"] = to_json(prof);
    auto probe = enumerate_fiber(s, 1, c.jobs);
    r["diagnosis"] = probe.diagnosis ? json(*probe.diagnosis) : json(nullptr);
    // A fiber ruled out by the criterion passes when the search is empty too.
    bool pass = prof.verdict == "match" || (!pred && probe.diagnosis && prof.verdict == "empty");
    return {r, pass};
}

Verdict cmd_orbital(const RunConfig& c) {
    auto F = make_field(c);
    Mat g = make_element(c, F);
    int N = c.window.value_or(6);
    auto a = orbital_integral(g, N, c.jobs), b = orbital_integral(g, N + 2, c.jobs);
    auto one = [](const OrbitalReport& o) {
        return json{{"N", o.window},
                    {"value", o.value_string()},
                    {"classes", o.classes_den == 1 ? std::to_string(o.classes_num)
                                                   : std::to_string(o.classes_num) + "/" + std::to_string(o.classes_den)},
                    {"lattices", o.lattices}};
    };
    json r;
    r["runs"] = {one(a), one(b)};
    r["e"] = a.e;
    r["f"] = a.f;
    r["value"] = a.value_string();
    bool stable = a.value_string() == b.value_string() && a.classes_num == b.classes_num && a.classes_den == b.classes_den;
    r["window_stable"] = stable;
    return {r, stable && a.classes_integral()};
}

Verdict cmd_jordan(const RunConfig& c) {
    auto F = make_field(c);
    Mat g = make_element(c, F);
    int N = c.window.value_or(8);
    json r;
    bool pass = true, any = false;
    try {
        auto jg = topological_jordan_group(g, N);
        r["group"] = {{"s", jg.s.with_prec(N).to_string()},
                      {"u", jg.u.with_prec(N).to_string()},
                      {"r", jg.r},
                      {"iterations", jg.iterations},
                      {"product_ok", jg.product_ok},
                      {"unipotent_ok", jg.unipotent_ok},
                      {"semisimple_ok", jg.semisimple_ok}};
        pass = pass && jg.all_ok();
        any = true;
    } catch (const DomainError& e) {
        r["group"] = {{"skipped", e.what()}};
    }
    try {
        auto jl = topological_jordan_lie(g, N);
        r["lie"] = {{"g0", jl.g0.with_prec(N).to_string()},
                    {"g1", jl.g1.with_prec(N).to_string()},
                    {"r", jl.r},
                    {"clusters", jl.clusters},
                    {"commute_ok", jl.commute_ok},
                    {"nilpotent_ok", jl.nilpotent_ok},
                    {"semisimple_ok", jl.semisimple_ok}};
        pass = pass && jl.all_ok();
        any = true;
    } catch (const DomainError& e) {
        r["lie"] = {{"skipped", e.what()}};
    }
    if (!any) throw DomainError("jordan: element is neither bounded with integral characteristic polynomial nor group-bounded");
    r["N"] = N;
    return {r, pass};
}

int emit_report(const RunConfig& c, const Verdict& v, double seconds, std::ostream& out) {
    json rep;
    rep["command"] = c.command;
    rep["config"] = c.to_json();
    rep["result"] = v.result;
    rep["verdict"] = v.pass ? "pass" : "fail";
    rep["timestamp"] = {{"utc", utc_now()}, {"wall_seconds", seconds}};
    std::string text = rep.dump(2) + "\n";
    out << text;
    if (!c.out.empty()) {
        std::ofstream f(c.out, std::ios::binary);
        if (!f) throw ParseError("cannot write " + c.out);
        f << text;
    }
    return v.pass ? kExitPass : kExitVerdictFail;
}

void write_out(const RunConfig& c, const std::string& text, std::ostream& out) {
    out << text;
    if (!c.out.empty()) {
        std::ofstream f(c.out, std::ios::binary);
        if (!f) throw ParseError("cannot write " + c.out);
        f << text;
    }
}

int cmd_enumerate(const RunConfig& c, std::ostream& out) {
    auto F = make_field(c);
    Mat g = make_element(c, F);
    auto inv = compute_invariants(g);
    std::optional<int> pred;
    FiberSpec s = fiber_spec(c, g, inv, pred);
    int m = c.extensions_set ? c.extensions : 1;
    auto res = enumerate_fiber(s, m, c.jobs);
    std::string text;
    if (c.format == "json") {
        json j;
        j["config"] = c.to_json();
        j["diagnosis"] = res.diagnosis ? json(*res.diagnosis) : json(nullptr);
        j["frame"] = res.frame.to_string();
        j["points"] = json::array();
        for (const auto& pt : res.points) {
            json chain = json::array();
            for (const auto& L : pt.chain) chain.push_back(L.to_tsv());
            j["points"].push_back(chain);
        }
        text = j.dump(2) + "\n";
    } else {
        if (res.diagnosis) text += "# diagnosis: " + *res.diagnosis + "\n";
        text += "# frame: " + res.frame.to_string() + "\n";
        for (size_t i = 0; i < res.points.size(); ++i)
            for (size_t k = 0; k < res.points[i].chain.size(); ++k)
                text += std::to_string(i) + "\t" + std::to_string(k) + "\t" + res.points[i].chain[k].to_tsv() + "\n";
    }
    write_out(c, text, out);
    return kExitPass;
}

int cmd_suite(const RunConfig& c, std::ostream& out) {
    BatteryOptions opt;
    opt.jobs = c.jobs;
    opt.seed = c.seed;
    std::stringstream ss(c.criteria);
    for (std::string tok; std::getline(ss, tok, ',');)
        if (!tok.empty()) opt.criteria.insert(std::stoi(tok));
    auto rep = run_battery(opt);
    bool pass = true;
    for (const auto& s : rep.criteria) pass = pass && s.failed == 0 && s.cases >= s.required_cases;
    if (c.format == "json") {
        json j;
        j["config"] = c.to_json();
        j["cases"] = json::array();
        for (const auto& r : rep.cases)
            j["cases"].push_back({{"case", r.id}, {"criterion", r.criterion}, {"verdict", r.pass ? "pass" : "fail"}, {"detail", r.detail}});
        j["verdict"] = pass ? "pass" : "fail";
        write_out(c, j.dump(2) + "\n", out);
    } else {
        write_out(c, battery_tsv(rep.cases), out);
    }
    return pass ? kExitPass : kExitVerdictFail;
}

int cmd_tables(const RunConfig& c, std::ostream& out) {
    if (c.format == "json") {
        json j = json::array();
        for (const auto& t : all_types(8))
            j.push_back({{"type", t.name()},
                         {"bad", bad_primes(t)},
                         {"torsion", torsion_primes(t)},
                         {"pi1_adjoint", pi1_adjoint(t).to_string()},
                         {"weyl_order", weyl_order(t)}});
        write_out(c, j.dump(2) + "\n", out);
    } else {
        write_out(c, root_tables_tsv(8) + "\n" + isogeny_table_tsv(8), out);
    }
    return kExitPass;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig c;
    c.argv = args;
    c.seed = seed_from_env();
    CLI::App app{"Affine Springer fiber invariants and lattice oracles"};
    app.require_subcommand(1);

    auto add_field = [&](CLI::App* s) {
        s->add_option("--p", c.p, "residue characteristic")->required();
        s->add_option("--unram", c.unram, "unramified degree of the base field");
        s->add_option("--eisenstein", c.eisenstein, "Eisenstein polynomial over the unramified base");
    };
    auto add_input = [&](CLI::App* s) {
        s->add_option("--matrix", c.matrix, "matrix literal, e.g. [[0,1],[2,0]]");
        s->add_option("--charpoly", c.charpoly, "characteristic polynomial, e.g. \"x^2 - 27\"");
    };
    auto add_fiber = [&](CLI::App* s) {
        s->add_option("--window", c.window, "window N: lattices between pi^N O^n and O^n");
        s->add_option("--level", c.level, "hyperspecial or iwahori")->check(CLI::IsMember({"hyperspecial", "iwahori"}));
        s->add_option("--coset", c.coset, "coset a of Pi^a for group fibers (default kappa)");
        s->add_option("--fiber", c.fiber, "lie or group")->check(CLI::IsMember({"lie", "group"}));
        s->add_option("--jobs", c.jobs, "worker threads")->check(CLI::PositiveNumber);
    };
    auto common = [&](CLI::App* s) {
        s->add_option("--out", c.out, "also write the report to this file");
        s->add_option("--format", c.format, "json or tsv")->check(CLI::IsMember({"json", "tsv"}));
    };

    auto* inv = app.add_subcommand("invariants", "conjugacy invariants of a class");
    add_field(inv);
    add_input(inv);
    common(inv);
    auto* dim = app.add_subcommand("dimension", "predicted dimension next to the enumerated count profile");
    add_field(dim);
    add_input(dim);
    add_fiber(dim);
    dim->add_option("--extensions", c.extensions, "largest residue extension degree M")->check(CLI::Range(2, 8));
    common(dim);
    auto* en = app.add_subcommand("enumerate", "stream of Hermite normal forms of fiber points");
    add_field(en);
    add_input(en);
    add_fiber(en);
    en->add_option("--extensions", c.extensions, "enumerate over the degree-m residue extension")->check(CLI::Range(1, 8));
    common(en);
    auto* orb = app.add_subcommand("orbital", "orbital integral at windows N and N+2");
    add_field(orb);
    add_input(orb);
    orb->add_option("--window", c.window, "window N");
    orb->add_option("--jobs", c.jobs, "worker threads")->check(CLI::PositiveNumber);
    common(orb);
    auto* jor = app.add_subcommand("jordan", "topological Jordan decompositions with certificates");
    add_field(jor);
    add_input(jor);
    jor->add_option("--window", c.window, "certification precision N");
    common(jor);
    auto* suite = app.add_subcommand("suite", "acceptance battery, one TSV row per case");
    suite->add_option("--jobs", c.jobs, "worker threads")->check(CLI::PositiveNumber);
    suite->add_option("--criteria", c.criteria, "comma-separated criterion ids (default all)");
    common(suite);
    auto* tab = app.add_subcommand("tables", "bad primes, torsion primes and fundamental groups");
    common(tab);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitPass;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return kExitUsage;
    }
    c.command = app.get_subcommands().front()->get_name();
    if (auto* o = app.get_subcommands().front()->get_option_no_throw("--extensions")) c.extensions_set = o->count() > 0;

    auto start = std::chrono::steady_clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };
    try {
        if (c.command == "enumerate") return cmd_enumerate(c, out);
        if (c.command == "suite") return cmd_suite(c, out);
        if (c.command == "tables") return cmd_tables(c, out);
        Verdict v;
        if (c.command == "invariants") v = cmd_invariants(c);
        else if (c.command == "dimension") v = cmd_dimension(c);
        else if (c.command == "orbital") v = cmd_orbital(c);
        else v = cmd_jordan(c);
        return emit_report(c, v, elapsed(), out);
    } catch (const ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const PrecisionError& e) {
        err << "precision error: " << e.what() << "\n";
        return kExitPrecision;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::logic_error& e) {
        err << "identity check failed: " << e.what() << "\n";
        return kExitVerdictFail;
    }
}

}  // namespace springerlab
