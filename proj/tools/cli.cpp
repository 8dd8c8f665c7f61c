#include "cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "totient/census.hpp"
#include "totient/diagnostics.hpp"
#include "totient/errors.hpp"
#include "totient/ghp.hpp"
#include "totient/parallel.hpp"

#ifndef TOTIENT_VERSION
#define TOTIENT_VERSION "0.0.0"
#endif

namespace totient::cli {
namespace {

std::string utc_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("cannot open output " + path);
    f << text;
    if (!f) throw ConfigError("write failed for " + path);
}

// Where CSV goes: a file (recorded in the manifest) or stdout.
class Outputs {
public:
    Outputs(std::ostream& out, std::string primary) : out_(out), primary_(std::move(primary)) {}

    void emit(const std::string& text) {
        if (primary_.empty()) {
            out_ << text;
        } else {
            write(primary_, text);
        }
    }
    void write(const std::string& path, const std::string& text) {
        write_text(path, text);
        files_.push_back(path);
    }
    const std::vector<std::string>& files() const { return files_; }
    const std::string& primary() const { return primary_; }

private:
    std::ostream& out_;
    std::string primary_;
    std::vector<std::string> files_;
};

struct Manifest {
    std::vector<std::string> args;
    std::string started;
    unsigned workers = 1;
};

void write_manifest(const std::string& path, const Manifest& m, const Outputs& outputs) {
    nlohmann::json j;
    j["command"] = m.args.empty() ? "" : m.args.front();
    j["args"] = m.args;
    j["version"] = TOTIENT_VERSION;
    j["started"] = m.started;
    j["finished"] = utc_now();
    j["workers"] = m.workers;
    nlohmann::json files = nlohmann::json::array();
    for (const auto& f : outputs.files()) files.push_back({{"path", f}, {"fnv1a64", file_checksum(f)}});
    j["outputs"] = files;
    write_text(path, j.dump(2) + "\n");
}

std::optional<unsigned> thread_flag(int threads) {
    if (threads < 0) throw ConfigError("--threads must be >= 1");
    return threads == 0 ? std::nullopt : std::optional<unsigned>(static_cast<unsigned>(threads));
}

SmoothParams smooth_params(double y, u64 x) { return y > 0 ? SmoothParams::with_y(y) : SmoothParams::for_range(x); }

std::string fmt(long double v, int digits) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << v;
    return os.str();
}

struct CensusFlags {
    std::string ell;
    u64 x = 0;
    u64 window = kDefaultCensusWindow;
    int threads = 0;
    std::string checkpoint;
    bool list_eq = false;
    std::string out;
    std::string manifest;
    std::string boundary = "odd-above-ell";
};

struct GhpFlags {
    std::string ell;
    u64 x = 0;
    u64 tmax = 0;
    int threads = 0;
    std::string out;
    std::string witness_out;
    std::string manifest;
};

struct DiagFlags {
    std::string sub;
    u64 ell = 1;
    u64 x = 0;
    double y = 0;
    u64 window = u64{1} << 18;
    int threads = 0;
    std::string mode = "euler";
    bool omega_window = false;
    bool ratio_cap = false;
    std::string ms = "1,2,3,4,5,6";
    std::string sign = "-";
    u64 d = 0;
    std::string out;
    std::string manifest;
};

int cmd_census(const CensusFlags& f, const std::vector<std::string>& args, std::ostream& out) {
    Manifest m{args, utc_now(), 1};
    CensusRequest req;
    req.ells = parse_ell_list(f.ell);
    req.x_max = f.x;
    req.window_size = f.window;
    req.collect_equality_primes = f.list_eq;
    req.boundary = parse_boundary(f.boundary);
    if (!f.checkpoint.empty()) req.checkpoint_path = f.checkpoint;
    RunOptions opts;
    opts.threads = thread_flag(f.threads);
    m.workers = resolve_threads(opts.threads);

    const CensusResult result = run_census(req, opts);
    for (const auto& [ell, t] : result.tallies) {
        if (t.gt + t.lt + t.eq != t.primes_considered) return kInvariantFailure;
        if (f.list_eq && t.equality_primes.size() != t.eq) return kInvariantFailure;
    }

    Outputs outputs(out, f.out);
    outputs.emit(census_csv(result, req.x_max));
    if (f.list_eq) {
        const std::string prefix = f.out.empty() ? "census" : f.out;
        for (const auto& [ell, t] : result.tallies) {
            std::string text;
            for (u64 p : t.equality_primes) text += std::to_string(p) + '\n';
            outputs.write(prefix + ".eq" + std::to_string(ell) + ".txt", text);
        }
    }
    const std::string manifest = !f.manifest.empty() ? f.manifest : (f.out.empty() ? "" : f.out + ".manifest.json");
    if (!manifest.empty()) write_manifest(manifest, m, outputs);
    return kOk;
}

int cmd_ghp(const GhpFlags& f, const std::vector<std::string>& args, std::ostream& out) {
    if (f.tmax == 0 && f.x == 0) throw ConfigError("ghp needs --tmax and/or --x");
    Manifest m{args, utc_now(), 1};
    Outputs outputs(out, f.out);
    const std::vector<u64> ells = parse_ell_list(f.ell);
    std::string text;

    if (f.tmax > 0) {
        text += "ell,t,f1,f2,f3,forced_index\n";
        for (u64 ell : ells) {
            if (!mersenne_exponent(ell)) continue;  // no GHP family: empty result
            const TripleEnumeration e = triple_enumerate(ell, f.tmax);
            for (const auto& h : e.hits) {
                text += std::to_string(ell) + ',' + std::to_string(h.t) + ',' + std::to_string(h.f1) + ',' +
                        std::to_string(h.f2) + ',' + std::to_string(h.f3) + ',' + std::to_string(h.forced_index) + '\n';
            }
        }
    }
    if (f.x > 0) {
        RunOptions opts;
        opts.threads = thread_flag(f.threads);
        m.workers = resolve_threads(opts.threads);
        CensusRequest req;
        req.ells = ells;
        req.x_max = f.x;
        req.collect_equality_primes = true;
        req.ell_limit = std::max(kDefaultEllLimit, ells.back());
        const CensusResult census = run_census(req, opts);
        std::vector<EqualityClassification> rows;
        std::vector<GhpWitness> witnesses;
        for (const auto& [ell, t] : census.tallies) {
            rows.push_back(classify_equality(ell, f.x, t.equality_primes));
            for (const auto& w : rows.back().ghp_form) {
                if (phi_naive(w.n) != phi_naive(w.n + w.k)) return kInvariantFailure;
                witnesses.push_back(w);
            }
        }
        text += classification_csv(rows);
        if (f.witness_out == "-") {
            text += witnesses_json(witnesses);
        } else if (!f.witness_out.empty()) {
            outputs.write(f.witness_out, witnesses_json(witnesses));
        }
    }
    outputs.emit(text);
    const std::string manifest = !f.manifest.empty() ? f.manifest : (f.out.empty() ? "" : f.out + ".manifest.json");
    if (!manifest.empty()) write_manifest(manifest, m, outputs);
    return kOk;
}

int cmd_diag(const DiagFlags& f, const std::vector<std::string>& args, std::ostream& out) {
    Manifest m{args, utc_now(), 1};
    ScanOptions scan;
    scan.window_size = f.window;
    scan.threads = thread_flag(f.threads);
    m.workers = resolve_threads(scan.threads);
    Outputs outputs(out, f.out);
    std::string text;
    auto need_x = [&] {
        if (f.x == 0) throw ConfigError("diag " + f.sub + " needs --x");
    };

    if (f.sub == "sanity") {
        if (f.y <= 0) throw ConfigError("diag sanity needs --y");
        const SanityMode mode = f.mode == "euler" ? SanityMode::euler
                                : f.mode == "exhaustive"
                                    ? SanityMode::exhaustive
                                    : throw ConfigError("--mode must be euler or exhaustive");
        const SanityResult r[] = {sanity_sum(f.y, mode, {f.omega_window, f.ratio_cap})};
        text = sanity_csv(r);
    } else if (f.sub == "density") {
        need_x();
        const DensityReport r[] = {density_report(f.ell, f.x, smooth_params(f.y, f.x), scan)};
        text = density_csv(r);
    } else if (f.sub == "flags") {
        need_x();
        text = flags_csv_header();
        for (const auto& row : flag_scan(f.ell, f.x, smooth_params(f.y, f.x), scan)) text += flags_csv_row(row);
    } else if (f.sub == "mod2m") {
        need_x();
        std::vector<unsigned> ms;
        for (u64 v : parse_ell_list(f.ms)) ms.push_back(static_cast<unsigned>(v));
        const std::vector<Fraction> fr = mod2m_census(f.ell, ms, f.x, scan);
        text = "ell,x,m,hits,total,fraction\n";
        for (std::size_t i = 0; i < ms.size(); ++i) {
            text += std::to_string(f.ell) + ',' + std::to_string(f.x) + ',' + std::to_string(ms[i]) + ',' +
                    std::to_string(fr[i].hits) + ',' + std::to_string(fr[i].total) + ',' + fmt(fr[i].value(), 6) + '\n';
        }
    } else if (f.sub == "reciprocal") {
        need_x();
        if (f.sign != "+" && f.sign != "-") throw ConfigError("--sign must be + or -");
        const ReciprocalMean r = reciprocal_mean(f.ell, f.sign == "+" ? 1 : -1, f.x, scan);
        text = "ell,x,sign,primes,mean\n" + std::to_string(f.ell) + ',' + std::to_string(f.x) + ',' + f.sign + ',' +
               std::to_string(r.primes) + ',' + fmt(r.mean(), 12) + '\n';
    } else if (f.sub == "pid") {
        need_x();
        const SmoothParams params = smooth_params(f.y, f.x);
        if (f.d > 0 && !divides_lcm_upto(f.d, params.y)) throw DomainError("D must divide L_y");
        const PiDCensus c = pi_d_census(f.ell, params, f.x, scan);
        text = "ell,x,y,D,count,main_term\n";
        auto row = [&](u128 d, u64 count) {
            const std::string main = f.ell == 1 && d % 24 == 0 ? fmt(pi_d_main_term(d, params, c.primes), 3) : "";
            text += std::to_string(f.ell) + ',' + std::to_string(f.x) + ',' + fmt(params.y, 6) + ',' + to_string(d) +
                    ',' + std::to_string(count) + ',' + main + '\n';
        };
        if (f.d > 0) {
            auto it = c.counts.find(f.d);
            row(f.d, it == c.counts.end() ? 0 : it->second);
        } else {
            for (const auto& [d, count] : c.counts) row(d, count);
            text += std::to_string(f.ell) + ',' + std::to_string(f.x) + ',' + fmt(params.y, 6) + ",inconvenient," +
                    std::to_string(c.inconvenient) + ",\n";
        }
    } else if (f.sub == "pairs") {
        if (f.d == 0 || f.y <= 0) throw ConfigError("diag pairs needs --d and --y");
        const PairFamily fam = pair_enumerate(f.d, f.y);
        text = "m1,m2,difference,weird\n";
        for (const auto& p : fam.pairs) {
            text += std::to_string(p.m1) + ',' + std::to_string(p.m2) + ',' + p.difference.to_string() + ',' +
                    (p.weird ? "1" : "0") + '\n';
        }
    } else {
        throw ConfigError("unknown diag report '" + f.sub + "'");
    }

    outputs.emit(text);
    const std::string manifest = !f.manifest.empty() ? f.manifest : (f.out.empty() ? "" : f.out + ".manifest.json");
    if (!manifest.empty()) write_manifest(manifest, m, outputs);
    return kOk;
}

int cmd_replay(const std::string& manifest_path, std::ostream& out, std::ostream& err) {
    std::ifstream in(manifest_path);
    if (!in) throw ConfigError("cannot open manifest " + manifest_path);
    const nlohmann::json j = nlohmann::json::parse(in);
    const auto args = j.at("args").get<std::vector<std::string>>();
    std::map<std::string, std::string> expected;
    for (const auto& o : j.at("outputs")) expected[o.at("path").get<std::string>()] = o.at("fnv1a64").get<std::string>();

    std::ostringstream sink;
    const int code = run(args, sink, err);
    if (code != kOk) return code;
    bool same = true;
    for (const auto& [path, sum] : expected) {
        const std::string now = file_checksum(path);
        out << path << ' ' << (now == sum ? "identical" : "DIFFERENT") << '\n';
        same = same && now == sum;
    }
    return same ? kOk : kInvariantFailure;
}

}  // namespace

std::string file_checksum(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot read " + path);
    u64 h = 14695981039346656037ull;
    char buf[1 << 16];
    while (f.read(buf, sizeof buf) || f.gcount() > 0) {
        for (std::streamsize i = 0; i < f.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ull;
        }
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Sign census of phi(p - ell) - phi(p + ell) over primes, with diagnostics", "totient"};
    app.require_subcommand(1);

    CensusFlags cf;
    auto* census = app.add_subcommand("census", "count primes by sign of phi(p-ell) - phi(p+ell)");
    census->add_option("--ell", cf.ell, "ell values: list and/or ranges, e.g. 1-64 or 1,3,15")->required();
    census->add_option("--x", cf.x, "upper bound on p")->required()->check(CLI::Range(u64{3}, kMaxValue));
    census->add_option("--window", cf.window, "integers per work unit")->check(CLI::Range(u64{1}, u64{1} << 30));
    census->add_option("--threads", cf.threads, "worker count (default: TOTIENT_THREADS or hardware)");
    census->add_option("--checkpoint", cf.checkpoint, "checkpoint file; resumed when present");
    census->add_flag("--list-eq", cf.list_eq, "write equality primes, one per line, to <out>.eq<ell>.txt");
    census->add_option("--out", cf.out, "CSV output path (default stdout)");
    census->add_option("--manifest", cf.manifest, "manifest path (default <out>.manifest.json)");
    census->add_option("--boundary", cf.boundary, "odd-above-ell | all-primes-abs");

    GhpFlags gf;
    auto* ghp = app.add_subcommand("ghp", "GHP prime triples and equality classification");
    ghp->add_option("--ell", gf.ell, "ell values")->required();
    ghp->add_option("--tmax", gf.tmax, "enumerate prime triples for t <= tmax");
    ghp->add_option("--x", gf.x, "classify equality primes p <= x");
    ghp->add_option("--threads", gf.threads, "worker count");
    ghp->add_option("--out", gf.out, "CSV output path (default stdout)");
    ghp->add_option("--witness-out", gf.witness_out, "JSON witness dump path, '-' for stdout");
    ghp->add_option("--manifest", gf.manifest, "manifest path");

    DiagFlags df;
    auto* diag = app.add_subcommand("diag", "proof-machinery diagnostics");
    diag->add_option("report", df.sub, "sanity | density | flags | mod2m | reciprocal | pid | pairs")->required();
    diag->add_option("--ell", df.ell, "ell")->check(CLI::Range(u64{1}, u64{1} << 20));
    diag->add_option("--x", df.x, "upper bound on p");
    diag->add_option("--y", df.y, "smoothness bound (default log log x)");
    diag->add_option("--window", df.window, "integers per work unit")->check(CLI::Range(u64{1}, u64{1} << 26));
    diag->add_option("--threads", df.threads, "worker count");
    diag->add_option("--mode", df.mode, "sanity mode: euler | exhaustive");
    diag->add_flag("--omega-window", df.omega_window, "sanity: restrict omega(D)");
    diag->add_flag("--ratio-cap", df.ratio_cap, "sanity: restrict D/phi(D)");
    diag->add_option("--m", df.ms, "mod2m exponents, list or range");
    diag->add_option("--sign", df.sign, "reciprocal: + or -");
    diag->add_option("--d", df.d, "pid / pairs: the value D");
    diag->add_option("--out", df.out, "CSV output path (default stdout)");
    diag->add_option("--manifest", df.manifest, "manifest path");

    SelftestOptions so;
    int st_threads = 0;
    auto* self = app.add_subcommand("selftest", "oracle and invariant suites at small scale");
    self->add_flag("--inject-phi-corruption", so.corrupt_phi, "test hook: corrupt one sieve value")->group("");
    self->add_option("--threads", st_threads, "worker count");

    std::string replay_path;
    auto* replay = app.add_subcommand("replay", "rerun a manifest and compare output checksums");
    replay->add_option("manifest", replay_path, "manifest JSON")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n' << app.help();
        return kUsage;
    }

    try {
        if (census->parsed()) {
            return cmd_census(cf, args, out);
        }
        if (ghp->parsed()) return cmd_ghp(gf, args, out);
        if (diag->parsed()) return cmd_diag(df, args, out);
        if (self->parsed()) {
            so.threads = static_cast<unsigned>(std::max(0, st_threads));
            return selftest(so, out);
        }
        if (replay->parsed()) return cmd_replay(replay_path, out, err);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const CheckpointError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kInvariantFailure;
    }
    return kUsage;
}

}  // namespace totient::cli
