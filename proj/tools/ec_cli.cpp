// ec: command-line front end for the library.
// Exit codes: 0 ok, 1 verify failure, 2 usage, 3 numeric error, 4 C in {0, 1}.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ec/checks.hpp"
#include "ec/curve_tracer.hpp"
#include "ec/elliptic_qseries.hpp"
#include "ec/errors.hpp"
#include "ec/premodular.hpp"
#include "ec/zero_locator.hpp"

namespace {

using ec::cplx;
using ec::UsageError;

struct RunConfig {
    double eps = 1e-12;
    double t_top = 6.0;
    double cusp_delta = 0.08;
    std::string out_format = "csv";
    std::string out_path;  // empty: stdout

    void validate() const {
        if (!(eps > 0.0 && eps <= 1e-6)) throw UsageError("eps must lie in (0, 1e-6]");
        if (!(t_top >= 3.0)) throw UsageError("t_top must be >= 3");
        if (!(cusp_delta > 0.0 && cusp_delta <= 0.2)) throw UsageError("cusp_delta must lie in (0, 0.2]");
        if (out_format != "csv" && out_format != "json") throw UsageError("out_format must be csv or json");
    }
    ec::PrecisionPolicy policy() const {
        ec::PrecisionPolicy pp;
        pp.eps = eps;
        return pp;
    }
    ec::ContourParams contour() const {
        ec::ContourParams cp;
        cp.t_top = t_top;
        cp.cusp_delta = cusp_delta;
        return cp;
    }
};

double parse_real(const std::string& key, const std::string& v) {
    std::size_t used = 0;
    double x = 0;
    try {
        x = std::stod(v, &used);
    } catch (const std::exception&) {
        throw UsageError(key + ": not a number: " + v);
    }
    if (used != v.size() || !std::isfinite(x)) throw UsageError(key + ": not a number: " + v);
    return x;
}

void set_key(RunConfig& rc, const std::string& key, const std::string& val) {
    if (key == "eps")
        rc.eps = parse_real(key, val);
    else if (key == "t_top")
        rc.t_top = parse_real(key, val);
    else if (key == "cusp_delta")
        rc.cusp_delta = parse_real(key, val);
    else if (key == "out_format")
        rc.out_format = val;
    else if (key == "out_path")
        rc.out_path = val;
    else
        throw UsageError("config: unknown key " + key);
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

void load_config_file(RunConfig& rc, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw UsageError(path + ":" + std::to_string(lineno) + ": expected key=value");
        set_key(rc, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
}

// a+bi, a-bi, bi or a; no spaces.
cplx parse_complex(const std::string& s) {
    static const std::regex full(R"(^([+-]?[0-9.]+(?:[eE][+-]?[0-9]+)?)([+-][0-9.]*(?:[eE][+-]?[0-9]+)?)i$)");
    static const std::regex imag(R"(^([+-]?[0-9.]*(?:[eE][+-]?[0-9]+)?)i$)");
    std::smatch m;
    auto part = [&](std::string t) {
        if (t.empty() || t == "+") return 1.0;
        if (t == "-") return -1.0;
        return parse_real("complex literal", t);
    };
    if (std::regex_match(s, m, full)) return {parse_real("complex literal", m[1]), part(m[2])};
    if (std::regex_match(s, m, imag)) return {0.0, part(m[1])};
    return {parse_real("complex literal", s), 0.0};
}

ec::TauPoint parse_tau(const std::string& s) {
    cplx z = parse_complex(s);
    if (!(z.imag() > 0)) throw UsageError("tau must have positive imaginary part: " + s);
    return ec::TauPoint(z);
}

std::vector<double> parse_list(const std::string& key, const std::string& s, std::size_t n) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_real(key, item));
    if (out.size() != n) throw UsageError(key + ": expected " + std::to_string(n) + " comma-separated numbers");
    return out;
}

// Output records: ordered fields of real, integer or text values.
using Field = std::variant<double, long long, std::string>;
using Record = std::vector<std::pair<std::string, Field>>;

std::string fmt15(double x) {
    char buf[64];
    if (x == 0.0) x = 0.0;  // no "-0"
    std::snprintf(buf, sizeof buf, "%.15g", x);
    return buf;
}

std::string render(const std::vector<std::string>& header, const std::vector<Record>& rows, const std::string& format) {
    std::ostringstream os;
    if (format == "csv") {
        for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
        os << "\n";
        for (const Record& r : rows) {
            for (std::size_t i = 0; i < r.size(); ++i) {
                if (i) os << ",";
                std::visit(
                    [&](const auto& v) {
                        using T = std::decay_t<decltype(v)>;
                        if constexpr (std::is_same_v<T, double>)
                            os << fmt15(v);
                        else
                            os << v;
                    },
                    r[i].second);
            }
            os << "\n";
        }
        return os.str();
    }
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const Record& r : rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (const auto& [k, v] : r) {
            std::visit(
                [&](const auto& x) {
                    using T = std::decay_t<decltype(x)>;
                    if constexpr (std::is_same_v<T, double>)
                        obj[k] = std::stod(fmt15(x));  // round to 15 digits
                    else
                        obj[k] = x;
                },
                v);
        }
        arr.push_back(std::move(obj));
    }
    return arr.dump(2) + "\n";
}

// Writes through a temporary so a failed run leaves no partial file.
void emit(const RunConfig& rc, const std::string& text) {
    if (rc.out_path.empty()) {
        std::cout << text << std::flush;
        return;
    }
    std::string tmp = rc.out_path + ".partial";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << text;
        out.flush();
        if (!out) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw UsageError("cannot write " + rc.out_path);
        }
    }
    std::filesystem::rename(tmp, rc.out_path);
}

void emit(const RunConfig& rc, const std::vector<std::string>& header, const std::vector<Record>& rows) {
    emit(rc, render(header, rows, rc.out_format));
}

std::vector<std::string> header_of(const Record& r) {
    std::vector<std::string> h;
    for (const auto& f : r) h.push_back(f.first);
    return h;
}

struct NoZero : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---- eval ----

struct EvalArgs {
    std::string fn;
    std::string tau;
    std::string rs;
    std::string z;
    int k = 0;
    std::optional<double> C;
    std::string sign = "plus";
};

void cmd_eval(const RunConfig& rc, const EvalArgs& a) {
    static const std::vector<std::string> fns = {"eta1", "e2", "g2", "g3", "ek", "wp",
                                                 "zeta", "zrs", "zrs2", "fc", "phi"};
    if (std::find(fns.begin(), fns.end(), a.fn) == fns.end()) throw UsageError("unknown --fn " + a.fn);
    if (a.tau.empty()) throw UsageError("--tau is required");
    ec::TauPoint tau = parse_tau(a.tau);
    ec::PrecisionPolicy pp = rc.policy();
    auto need = [](bool ok, const char* what) {
        if (!ok) throw UsageError(std::string(what) + " is required for this --fn");
    };

    cplx v;
    int weight = 2;
    if (a.fn == "eta1") {
        v = ec::eval_eta1(tau, pp);
    } else if (a.fn == "e2") {
        v = ec::eval_E2(tau, pp);
    } else if (a.fn == "g2") {
        v = ec::eval_invariants(tau, pp).g2;
        weight = 4;
    } else if (a.fn == "g3") {
        v = ec::eval_invariants(tau, pp).g3;
        weight = 6;
    } else if (a.fn == "ek") {
        if (a.k < 1 || a.k > 3) throw UsageError("--k must be 1, 2 or 3");
        v = ec::eval_ek(a.k, tau, pp);
    } else if (a.fn == "wp" || a.fn == "zeta") {
        need(!a.z.empty(), "--z");
        auto z = parse_list("--z", a.z, 2);
        ec::Weierstrass w = ec::eval_weierstrass({z[0], z[1]}, tau, pp);
        v = a.fn == "wp" ? w.wp : w.zeta;
        weight = a.fn == "wp" ? 2 : 1;
    } else if (a.fn == "zrs" || a.fn == "zrs2") {
        need(!a.rs.empty(), "--rs");
        auto rs = parse_list("--rs", a.rs, 2);
        v = a.fn == "zrs" ? ec::eval_Zrs({rs[0], rs[1]}, tau, pp) : ec::eval_Zrs2({rs[0], rs[1]}, tau, pp);
        weight = a.fn == "zrs" ? 1 : 3;
    } else if (a.fn == "fc") {
        need(a.C.has_value(), "--C");
        v = ec::eval_fC(*a.C, tau, pp);
        weight = 4;
    } else {
        ec::BranchState br;
        if (a.sign == "plus")
            br.sign = ec::Sign::plus;
        else if (a.sign == "minus")
            br.sign = ec::Sign::minus;
        else
            throw UsageError("--sign must be plus or minus");
        br.anchor = ec::sqrt_g2_12(tau, pp);
        v = ec::eval_phi(br, tau, pp);
        weight = 0;
    }
    double bound = ec::error_bound(tau, weight, pp) * std::max(1.0, std::abs(v));
    Record r = {{"fn", a.fn}, {"re", v.real()}, {"im", v.imag()}, {"error_bound", bound}};
    emit(rc, header_of(r), {r});
}

// ---- find-tau ----

void cmd_find_tau(const RunConfig& rc, double C) {
    if (C == 0.0 || C == 1.0) throw NoZero("no zero for C in {0, 1}");
    ec::SolveOptions so;
    so.contour = rc.contour();
    ec::TauCSolution s = ec::solve_tauC(C, rc.policy(), std::nullopt, so);
    Record r = {{"C", C},
                {"re", s.tau.re()},
                {"im", s.tau.im()},
                {"residual", s.residual},
                {"branch_sign", std::string(ec::sign_name(s.phi_sign))}};
    emit(rc, header_of(r), {r});
}

// ---- trace ----

void cmd_trace(const RunConfig& rc, const std::string& branch, double lo, double hi, int steps) {
    ec::Branch b = ec::parse_branch(branch);
    ec::TraceOptions opts;
    opts.contour = rc.contour();
    ec::TraceResult tr = ec::trace_curve(b, lo, hi, steps, rc.policy(), opts);
    std::vector<Record> rows;
    for (const ec::CurveSample& s : tr.samples)
        rows.push_back({{"C", s.C},
                        {"re_tau", s.tau.re()},
                        {"im_tau", s.tau.im()},
                        {"residual", s.residual},
                        {"branch", std::string(ec::branch_name(s.branch))}});
    emit(rc, {"C", "re_tau", "im_tau", "residual", "branch"}, rows);
}

// ---- count ----

void cmd_count(const RunConfig& rc, const std::string& fn, const std::string& rs_s, std::optional<double> C,
               const std::string& region) {
    ec::PrecisionPolicy pp = rc.policy();
    ec::ContourParams cp = rc.contour();
    bool whole = region == "F0";
    std::vector<double> box;
    if (!whole) {
        box = parse_list("--region", region, 4);
        if (!(box[0] < box[1] && box[2] < box[3] && box[2] > 0))
            throw UsageError("--region must be F0 or x0,x1,y0,y1 with x0<x1, 0<y0<y1");
    }
    ec::CountResult cr;
    if (fn == "zrs2") {
        if (rs_s.empty()) throw UsageError("--rs is required for --fn zrs2");
        auto v = parse_list("--rs", rs_s, 2);
        ec::CharPair rs{v[0], v[1]};
        if (whole) {
            cr = ec::count_zeros_Zrs2(rs, pp, cp);
        } else {
            auto f = [&](cplx t) { return ec::eval_Zrs2(rs, ec::TauPoint(t), pp); };
            cr = ec::count_zeros(f, ec::Contour::rectangle(box[0], box[1], box[2], box[3]), cp.zero_threshold,
                                 cp.exec);
        }
    } else if (fn == "fc") {
        if (!C) throw UsageError("--C is required for --fn fc");
        if (whole) {
            cr = ec::count_zeros_fC(*C, pp, cp);
        } else {
            double sc = ec::fC_scale(*C);
            auto f = [&](cplx t) { return ec::eval_fC(*C, ec::TauPoint(t), pp) / sc; };
            cr = ec::count_zeros(f, ec::Contour::rectangle(box[0], box[1], box[2], box[3]), cp.zero_threshold,
                                 cp.exec);
        }
    } else {
        throw UsageError("--fn must be zrs2 or fc");
    }
    Record r = {{"count", (long long)cr.count}, {"contour_points_used", (long long)cr.points_used}};
    emit(rc, header_of(r), {r});
}

// ---- critical ----

void cmd_critical(const RunConfig& rc, int max_c) {
    if (max_c < 2) throw UsageError("--max-c must be >= 2");
    auto pts = ec::critical_points_E2(max_c, rc.policy());
    std::vector<Record> rows;
    for (const ec::CriticalPoint& p : pts)
        rows.push_back({{"a", (long long)p.gamma.a()},
                        {"b", (long long)p.gamma.b()},
                        {"c", (long long)p.gamma.c()},
                        {"d", (long long)p.gamma.d()},
                        {"re_tau", p.tau_star.re()},
                        {"im_tau", p.tau_star.im()},
                        {"residual_E2prime", p.residual}});
    emit(rc, {"a", "b", "c", "d", "re_tau", "im_tau", "residual_E2prime"}, rows);
}

// ---- verify ----

int cmd_verify(const RunConfig& rc, const std::string& suite, bool json_report) {
    ec::CheckConfig cfg;
    cfg.pp = rc.policy();
    cfg.contour = rc.contour();
    auto results = ec::run_suite(suite, cfg);
    int fails = 0;
    for (const ec::CheckResult& r : results) {
        std::printf("%-3s %-9s %-28s %s\n", r.id.c_str(), ec::status_name(r.status), r.name.c_str(),
                    r.detail.c_str());
        if (r.status == ec::Status::fail) ++fails;
    }
    std::printf("%zu checks, %d failed\n", results.size(), fails);
    if (json_report) {
        // no timings, so the report is reproducible
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const ec::CheckResult& r : results)
            arr.push_back({{"id", r.id}, {"name", r.name}, {"status", ec::status_name(r.status)}, {"detail", r.detail}});
        if (rc.out_path.empty()) {
            std::cout << arr.dump(2) << "\n";
        } else {
            emit(rc, arr.dump(2) + "\n");
        }
    }
    for (const ec::CheckResult& r : results)
        if (r.status == ec::Status::fail) std::fprintf(stderr, "failed: %s %s: %s\n", r.id.c_str(), r.name.c_str(), r.detail.c_str());
    return fails == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"elliptic functions, E2 critical points and degeneracy curves"};
    app.require_subcommand(1);
    app.fallthrough();  // global options may follow the subcommand

    std::string config_path;
    std::optional<double> f_eps, f_ttop, f_delta;
    std::optional<std::string> f_format, f_out;
    app.add_option("--config", config_path, "flat key=value file with RunConfig fields");
    app.add_option("--eps", f_eps, "truncation tolerance, in (0, 1e-6]");
    app.add_option("--t-top", f_ttop, "height of the truncated F0, >= 3");
    app.add_option("--cusp-delta", f_delta, "horodisk diameter cut at the cusps, in (0, 0.2]");
    app.add_option("--format", f_format, "csv or json");
    app.add_option("--out", f_out, "output file (default stdout)");

    EvalArgs ea;
    auto* s_eval = app.add_subcommand("eval", "evaluate one function at tau");
    s_eval->add_option("--fn", ea.fn, "eta1 e2 g2 g3 ek wp zeta zrs zrs2 fc phi")->required();
    s_eval->add_option("--tau", ea.tau, "a+bi");
    s_eval->add_option("--rs", ea.rs, "r,s");
    s_eval->add_option("--z", ea.z, "lattice coordinates r,s of z = r + s tau");
    s_eval->add_option("--k", ea.k, "index of e_k");
    s_eval->add_option("--C", ea.C, "parameter of f_C");
    s_eval->add_option("--sign", ea.sign, "plus or minus, for phi");

    double find_C = 0;
    auto* s_find = app.add_subcommand("find-tau", "zero of f_C in F0");
    s_find->add_option("--C", find_C)->required();

    std::string tr_branch;
    double tr_lo = 0, tr_hi = 0;
    int tr_steps = 0;
    auto* s_trace = app.add_subcommand("trace", "sample a degeneracy curve");
    s_trace->add_option("--branch", tr_branch, "minus, zero or plus")->required();
    s_trace->add_option("--clo", tr_lo)->required();
    s_trace->add_option("--chi", tr_hi)->required();
    s_trace->add_option("--steps", tr_steps)->required();

    std::string ct_fn, ct_rs, ct_region = "F0";
    std::optional<double> ct_C;
    auto* s_count = app.add_subcommand("count", "contour zero count");
    s_count->add_option("--fn", ct_fn, "zrs2 or fc")->required();
    s_count->add_option("--rs", ct_rs, "r,s");
    s_count->add_option("--C", ct_C);
    s_count->add_option("--region", ct_region, "F0 or x0,x1,y0,y1");

    int max_c = 0;
    auto* s_crit = app.add_subcommand("critical", "critical points of E2 over Gamma0(2) tiles");
    s_crit->add_option("--max-c", max_c)->required();

    std::string suite;
    bool json_report = false;
    auto* s_verify = app.add_subcommand("verify", "run a check suite");
    s_verify->add_option("--suite", suite, "functions modular premodular curves special all")->required();
    s_verify->add_flag("--json", json_report, "also write a JSON report (to --out or stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        // defaults < config file < EC_PRECISION < flags
        RunConfig rc;
        if (!config_path.empty()) load_config_file(rc, config_path);
        if (const char* env = std::getenv("EC_PRECISION"); env && *env) rc.eps = parse_real("EC_PRECISION", env);
        if (f_eps) rc.eps = *f_eps;
        if (f_ttop) rc.t_top = *f_ttop;
        if (f_delta) rc.cusp_delta = *f_delta;
        if (f_format) rc.out_format = *f_format;
        if (f_out) rc.out_path = *f_out;
        rc.validate();

        if (*s_eval) cmd_eval(rc, ea);
        else if (*s_find) cmd_find_tau(rc, find_C);
        else if (*s_trace) cmd_trace(rc, tr_branch, tr_lo, tr_hi, tr_steps);
        else if (*s_count) cmd_count(rc, ct_fn, ct_rs, ct_C, ct_region);
        else if (*s_crit) cmd_critical(rc, max_c);
        else if (*s_verify) return cmd_verify(rc, suite, json_report);
        return 0;
    } catch (const NoZero& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 4;
    } catch (const ec::NumericError& e) {
        std::fprintf(stderr, "%s: %s\n", e.name(), e.what());
        return 3;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "usage: %s\n", e.what());
        return 2;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "usage: %s\n", e.what());
        return 2;
    }
}
