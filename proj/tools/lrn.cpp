// lrn: solve, search and verify x^2 + p^(2k+1) = 4y^n.
//
// Exit status: 0 success, 1 verification failure, 2 usage or data error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <lrn/lrn.hpp>

namespace {

using lrn::Json;

constexpr int kOk = 0;
constexpr int kVerifyFailed = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void emit(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write " + path);
    out << text;
}

std::string read_input(const std::string& path) {
    if (path == "-") return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

std::string params_text(const Json& params) {
    std::string s;
    for (auto it = params.begin(); it != params.end(); ++it) {
        if (!s.empty()) s += ";";
        s += it.key() + "=" + it.value().dump();
    }
    return s;
}

// Solution records rendered as json (array), csv or an aligned table.
std::string render_records(const Json& records, const std::string& format, const Json& envelope) {
    if (format == "json") {
        Json out = envelope;
        out["solutions"] = records;
        return out.dump(2) + "\n";
    }
    std::ostringstream os;
    if (format == "csv") {
        os << "p,x,y,k,n,family,params\n";
        for (const auto& r : records) {
            os << r.at("p").get<unsigned long>() << ',' << csv_field(r.at("x").get<std::string>()) << ','
               << csv_field(r.at("y").get<std::string>()) << ',' << r.at("k").get<unsigned long>() << ','
               << r.at("n").get<unsigned long>() << ',' << csv_field(r.at("family").get<std::string>()) << ','
               << csv_field(params_text(r.at("params"))) << '\n';
        }
        return os.str();
    }
    std::vector<std::vector<std::string>> rows{{"p", "x", "y", "k", "n", "family", "params"}};
    for (const auto& r : records) {
        rows.push_back({std::to_string(r.at("p").get<unsigned long>()), r.at("x").get<std::string>(),
                        r.at("y").get<std::string>(), std::to_string(r.at("k").get<unsigned long>()),
                        std::to_string(r.at("n").get<unsigned long>()), r.at("family").get<std::string>(),
                        params_text(r.at("params"))});
    }
    std::vector<std::size_t> width(rows[0].size(), 0);
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
    }
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            os << row[i];
            if (i + 1 < row.size()) os << std::string(width[i] - row[i].size() + 2, ' ');
        }
        os << '\n';
    }
    return os.str();
}

struct SolveOpts {
    unsigned long p = 0;
    unsigned long k_max = lrn::kDefaultKMax;
    unsigned long n_max = lrn::kDefaultNMax;
    bool include_n1 = false;
    std::string certificate;
    std::string format = "json";
    std::string output;
};

int run_solve(const SolveOpts& o) {
    const auto prime = lrn::RamifiedPrime::certified(o.p);
    const auto res = lrn::solve_complete(prime, {o.k_max, o.n_max, o.include_n1});
    if (!o.certificate.empty()) emit(res.certificate.dump(2) + "\n", o.certificate);
    Json env;
    env["p"] = o.p;
    env["bounds"] = lrn::bounds_json({o.k_max, o.n_max, o.include_n1});
    emit(render_records(res.certificate.at("solutions"), o.format, env), o.output);
    return kOk;
}

struct SearchOpts {
    unsigned long p = 0;
    unsigned long y_max = 100;
    unsigned long n_max = 10;
    long k_max = -1;
    unsigned workers = 0;
    bool permissive = false;
    std::string format = "json";
    std::string output;
};

int run_search(const SearchOpts& o) {
    const auto prime = o.permissive ? lrn::RamifiedPrime::permissive(o.p) : lrn::RamifiedPrime::certified(o.p);
    lrn::SearchBounds b{o.y_max, o.n_max, std::nullopt};
    if (o.k_max >= 0) b.k_max = static_cast<unsigned long>(o.k_max);
    const unsigned workers = o.workers ? o.workers : std::max(1u, std::thread::hardware_concurrency());
    const auto sols = lrn::brute_search(prime, b, workers);
    Json env;
    env["p"] = o.p;
    env["certified"] = prime.is_certified();
    env["bounds"] = {{"y_max", o.y_max}, {"n_max", o.n_max}};
    if (b.k_max) env["bounds"]["k_max"] = *b.k_max;
    emit(render_records(lrn::solutions_to_json(sols), o.format, env), o.output);
    return kOk;
}

int run_verify(const std::string& input, const std::string& output) {
    Json doc;
    try {
        doc = Json::parse(read_input(input));
    } catch (const Json::parse_error& e) {
        throw lrn::FormatError(std::string("input is not valid JSON: ") + e.what());
    }
    const Json* arr = &doc;
    if (doc.is_object()) {
        if (doc.contains("solutions")) {
            arr = &doc.at("solutions");
        } else if (doc.contains("instances")) {
            arr = &doc.at("instances");
        }
    }
    if (!arr->is_array()) throw lrn::FormatError("expected an array of solution records");

    Json report;
    Json records = Json::array();
    std::vector<std::string> failed_rows;
    bool all_ok = true;
    for (std::size_t i = 0; i < arr->size(); ++i) {
        const auto& rec = (*arr)[i];
        const auto s = lrn::solution_from_json(rec);
        const bool ok = lrn::verify_solution(s);
        all_ok = all_ok && ok;
        Json r;
        r["index"] = i;
        if (rec.contains("row")) r["row"] = rec.at("row");
        r["x"] = lrn::to_dec(s.x);
        r["y"] = lrn::to_dec(s.y);
        r["p"] = s.p;
        r["k"] = s.k;
        r["n"] = s.n;
        r["valid"] = ok;
        records.push_back(r);
        if (!ok && rec.contains("row") && rec.at("row").is_string()) {
            const auto row = rec.at("row").get<std::string>();
            if (std::find(failed_rows.begin(), failed_rows.end(), row) == failed_rows.end()) failed_rows.push_back(row);
        }
    }
    report["records"] = records;
    report["failed_rows"] = failed_rows;
    if (doc.is_object() && doc.contains("steps")) {
        const auto replay = lrn::replay_certificate(doc);
        Json c;
        c["replayed"] = replay.ok;
        if (!replay.ok) {
            c["reason"] = replay.reason;
            if (replay.step_index) {
                c["step_index"] = *replay.step_index;
                c["step_id"] = replay.step_id;
            }
        }
        report["certificate"] = c;
        all_ok = all_ok && replay.ok;
    }
    report["ok"] = all_ok;
    emit(report.dump(2) + "\n", output);
    return all_ok ? kOk : kVerifyFailed;
}

Json fixture(const std::string& which) {
    Json out;
    Json inst = Json::array();
    if (which == "sporadic") {
        out["fixture"] = "sporadic";
        for (const auto& s : lrn::sporadic_solutions()) {
            Json r;
            r["x"] = lrn::to_dec(s.x);
            r["y"] = lrn::to_dec(s.y);
            r["p"] = s.p;
            r["k"] = s.k;
            r["n"] = s.n;
            inst.push_back(r);
        }
    } else {
        const auto variant = which == "literal" ? lrn::TableVariant::Literal : lrn::TableVariant::Corrected;
        out["fixture"] = "families-" + which;
        for (const auto& ti : lrn::table_instances(variant, 3)) {
            Json r;
            r["row"] = ti.row;
            r["params"] = lrn::params_to_json(ti.params);
            r["x"] = lrn::to_dec(ti.solution.x);
            r["y"] = lrn::to_dec(ti.solution.y);
            r["p"] = ti.solution.p;
            r["k"] = ti.solution.k;
            r["n"] = ti.solution.n;
            inst.push_back(r);
        }
    }
    out["instances"] = inst;
    return out;
}

struct FamilyOpts {
    bool list = false;
    std::string id;
    std::size_t count = 10;
    std::vector<std::string> params;
    std::string fixture;
    std::string format = "json";
    std::string output;
};

int run_families(const FamilyOpts& o) {
    const int chosen = int(o.list) + int(!o.id.empty()) + int(!o.fixture.empty());
    if (chosen != 1) throw UsageError("families needs exactly one of --list, --id or --fixture");
    if (o.list) {
        Json arr = Json::array();
        for (const auto& f : lrn::family_catalog()) {
            arr.push_back({{"id", f.name}, {"params", f.params}, {"form", f.form}, {"tabulated", f.tabulated}});
        }
        emit(Json{{"families", arr}}.dump(2) + "\n", o.output);
        return kOk;
    }
    if (!o.fixture.empty()) {
        if (o.fixture != "literal" && o.fixture != "corrected" && o.fixture != "sporadic") {
            throw UsageError("--fixture must be literal, corrected or sporadic");
        }
        emit(fixture(o.fixture).dump(2) + "\n", o.output);
        return kOk;
    }
    lrn::Params params;
    for (const auto& kv : o.params) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw UsageError("--param expects key=value, got '" + kv + "'");
        try {
            params[kv.substr(0, eq)] = std::stol(kv.substr(eq + 1));
        } catch (const std::exception&) {
            throw UsageError("--param value must be an integer: '" + kv + "'");
        }
    }
    const auto sols = lrn::family_generate(lrn::family_from_string(o.id), params, o.count);
    Json env;
    env["family"] = o.id;
    emit(render_records(lrn::solutions_to_json(sols), o.format, env), o.output);
    return kOk;
}

struct LucasOpts {
    unsigned long p = 0;
    std::string a;
    std::string b;
    unsigned long n = 1;
    bool primitive = false;
    std::string output;
};

int run_lucas(const LucasOpts& o) {
    const auto prime = lrn::RamifiedPrime::permissive(o.p);
    const auto alpha = lrn::QuadInt::make(prime, lrn::from_dec(o.a), lrn::from_dec(o.b));
    const auto pair = lrn::make_lucas_pair(alpha);
    Json out;
    out["p"] = o.p;
    out["alpha"] = {{"a", lrn::to_dec(alpha.a())}, {"b", lrn::to_dec(alpha.b())}};
    out["trace"] = lrn::to_dec(pair.trace);
    out["norm"] = lrn::to_dec(pair.norm);
    out["n"] = o.n;
    out["u_n"] = lrn::to_dec(lrn::lucas_term(pair, o.n).value);
    out["v_n"] = lrn::to_dec(lrn::companion_term(pair, o.n));
    if (o.primitive) {
        const auto rep = lrn::primitive_divisor_check(pair, o.n);
        Json prim = Json::array();
        for (const auto& ell : rep.primitive) prim.push_back(lrn::to_dec(ell));
        out["primitive_divisors"] = prim;
        out["factorization_incomplete"] = rep.factorization_incomplete;
    }
    emit(out.dump(2) + "\n", o.output);
    return kOk;
}

Json rule_json(const lrn::CongruenceRule& r) {
    Json j;
    j["id"] = r.id;
    j["primes"] = r.primes;
    j["form"] = lrn::to_string(r.form);
    j["modulus"] = r.modulus;
    j["reduced_modulus"] = r.reduced_modulus;
    j["target"] = r.target;
    j["statement"] = r.statement;
    j["validated_by_enumeration"] = lrn::rule_validates_by_enumeration(r);
    Json verdicts = Json::array();
    for (const auto p : r.primes) {
        const auto prime = lrn::RamifiedPrime::certified(p);
        Json ks = Json::array();
        for (unsigned long k = 0; k < 6; ++k) ks.push_back(lrn::rule_eliminates(r, prime, k));
        verdicts.push_back({{"p", p}, {"eliminates_k0_to_k5", ks}});
    }
    j["verdicts"] = verdicts;
    return j;
}

int run_sieve(bool list, const std::string& id, const std::string& output) {
    if (list == !id.empty()) throw UsageError("sieve needs exactly one of --list or --rule");
    Json out;
    if (list) {
        Json arr = Json::array();
        for (const auto& r : lrn::congruence_rules()) arr.push_back(rule_json(r));
        out["rules"] = arr;
    } else {
        out = rule_json(lrn::rule_by_id(id));
    }
    emit(out.dump(2) + "\n", output);
    return kOk;
}

void diagnostic(const char* kind, const std::string& message) {
    std::cerr << Json{{"error", kind}, {"message", message}}.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact solver and verifier for x^2 + p^(2k+1) = 4y^n"};
    app.require_subcommand(1);
    const std::vector<std::string> formats{"json", "csv", "table"};

    SolveOpts solve;
    auto* sc = app.add_subcommand("solve", "complete solution set with certificate");
    sc->add_option("--p", solve.p, "certified prime")->required();
    sc->add_option("--k-max", solve.k_max, "largest k")->capture_default_str();
    sc->add_option("--n-max", solve.n_max, "largest n")->capture_default_str()->check(CLI::Range(2ul, 200ul));
    sc->add_flag("--include-n1", solve.include_n1, "also emit n = 1 members");
    sc->add_option("--certificate", solve.certificate, "write the certificate JSON here");
    sc->add_option("--format", solve.format)->check(CLI::IsMember(formats))->capture_default_str();
    sc->add_option("--output", solve.output, "output file (default stdout)");

    SearchOpts search;
    auto* se = app.add_subcommand("search", "brute-force oracle");
    se->add_option("--p", search.p, "prime = 3 (mod 4)")->required();
    se->add_option("--y-max", search.y_max)->capture_default_str()->check(CLI::PositiveNumber);
    se->add_option("--n-max", search.n_max)->capture_default_str()->check(CLI::Range(2ul, 200ul));
    se->add_option("--k-max", search.k_max, "largest k (default: implied by y and n)");
    se->add_option("--workers", search.workers, "threads (default: hardware)");
    se->add_flag("--permissive", search.permissive, "allow uncertified primes");
    se->add_option("--format", search.format)->check(CLI::IsMember(formats))->capture_default_str();
    se->add_option("--output", search.output);

    std::string verify_input;
    std::string verify_output;
    auto* ve = app.add_subcommand("verify", "check solution records or a certificate");
    ve->add_option("--input", verify_input, "JSON file, or - for stdin")->required();
    ve->add_option("--output", verify_output);

    FamilyOpts fam;
    auto* fa = app.add_subcommand("families", "list, generate or export family fixtures");
    fa->add_flag("--list", fam.list);
    fa->add_option("--id", fam.id);
    fa->add_option("--count", fam.count)->capture_default_str();
    fa->add_option("--param", fam.params, "fixed parameter key=value (repeatable)");
    fa->add_option("--fixture", fam.fixture, "literal | corrected | sporadic");
    fa->add_option("--format", fam.format)->check(CLI::IsMember(formats))->capture_default_str();
    fa->add_option("--output", fam.output);

    LucasOpts luc;
    auto* lu = app.add_subcommand("lucas", "Lucas sequence of (a + b sqrt(-p))/2");
    lu->add_option("--p", luc.p)->required();
    lu->add_option("--a", luc.a)->required();
    lu->add_option("--b", luc.b)->required();
    lu->add_option("--n", luc.n)->required();
    lu->add_flag("--primitive-divisors", luc.primitive);
    lu->add_option("--output", luc.output);

    bool sieve_list = false;
    std::string sieve_rule;
    std::string sieve_output;
    auto* si = app.add_subcommand("sieve", "congruence rules");
    si->add_flag("--list", sieve_list);
    si->add_option("--rule", sieve_rule);
    si->add_option("--output", sieve_output);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (sc->parsed()) return run_solve(solve);
        if (se->parsed()) return run_search(search);
        if (ve->parsed()) return run_verify(verify_input, verify_output);
        if (fa->parsed()) return run_families(fam);
        if (lu->parsed()) return run_lucas(luc);
        if (si->parsed()) return run_sieve(sieve_list, sieve_rule, sieve_output);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const lrn::Error& e) {
        diagnostic(e.kind(), e.what());
        return kUsage;
    } catch (const std::exception& e) {
        diagnostic("InternalError", e.what());
        return kUsage;
    }
    return kUsage;
}
