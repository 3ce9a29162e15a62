#include "cli.hpp"

#include <openssl/evp.h>

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"
#include "qkd3/attack_model.hpp"
#include "qkd3/decoy.hpp"
#include "qkd3/epbound.hpp"
#include "qkd3/errors.hpp"
#include "qkd3/keyrate.hpp"
#include "qkd3/protocol_sim.hpp"
#include "qkd3/serialize.hpp"
#include "qkd3/sweeps.hpp"

#ifndef QKD3_VERSION
#define QKD3_VERSION "0.0.0"
#endif

namespace qkd3::cli {

namespace {

using nlohmann::json;

struct Options {
    double eb = 0.0;
    double alpha = 0.0;
    std::string bound_method = "exact";

    double eb_max = 0.1;
    int fig1_steps = 101;

    int region_steps = 51;
    std::string region_method = "approx";

    std::string protocol = "three-state";
    double l_min = 0.0;
    double l_max = 150.0;
    double l_step = 1.0;
    std::string params_file;

    long long n = 100000;
    double delta = 0.1;
    std::uint64_t seed = 1;
    std::string attack = "1,0,0,0,0,0,0,0";

    std::string out_path;
    std::string manifest_path;
    std::string replay_manifest;
};

// Output of one subcommand plus what the manifest needs to reproduce it.
struct Result {
    std::string subcommand;
    std::vector<std::string> args;
    json parameters = json::object();
    std::vector<std::uint64_t> seeds;
    std::string payload;
};

BoundMethod parse_method(const std::string& name) {
    if (name == "exact") return BoundMethod::exact;
    if (name == "approx") return BoundMethod::approximate;
    if (name == "simple") return BoundMethod::simple;
    throw ParseError("unknown method '" + name + "'");
}

std::string csv(std::initializer_list<double> cells) {
    std::string line;
    for (double c : cells) {
        if (!line.empty()) line += ',';
        line += format9(c);
    }
    return line + '\n';
}

std::string sha256_hex(const std::string& data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256 failed");
    std::ostringstream hex;
    for (unsigned int i = 0; i < len; ++i)
        hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
    return hex.str();
}

std::string cmd_bound(const Options& o) {
    const BoundResult exact = exact_bound(o.eb, o.alpha);
    const BoundMethod chosen = parse_method(o.bound_method);
    json j{
        {"e_b", round9(o.eb)},
        {"alpha", round9(o.alpha)},
        {"ep_exact", round9(exact.ep_max)},
        {"ep_approx", round9(approx_bound(o.eb, o.alpha))},
        {"ep_simple", round9(simple_bound(o.eb, o.alpha))},
        {"ay_star", round9(exact.ay_star)},
        {"witness", format_attack(exact.witness)},
        {"method", o.bound_method},
        {"ep", round9(phase_error_bound(o.eb, o.alpha, chosen))},
    };
    return j.dump(2) + '\n';
}

std::string cmd_fig1(const Options& o) {
    std::string out = "eb,ep_exact,ep_approx,ep_5eb\n";
    for (const auto& r : kernels::fig1_sweep(o.eb_max, o.fig1_steps))
        out += csv({r.eb, r.ep_exact, r.ep_approx, r.ep_5eb});
    return out;
}

std::string cmd_region(const Options& o) {
    const BoundMethod m = parse_method(o.region_method);
    if (m == BoundMethod::simple) throw DomainError("region supports --method exact or approx");
    std::string out = "alpha,eb_max\n";
    for (const auto& p : kernels::region_sweep(o.region_steps, m)) out += csv({p.alpha, p.eb_max});
    return out;
}

std::string cmd_decoy(const Options& o) {
    const ChannelParams params =
        o.params_file.empty() ? ChannelParams{} : load_channel_params(o.params_file);
    const Protocol protocol = parse_protocol(o.protocol);
    std::string out = "L_km,mu,Q_mu,E_mu,Q1,e1,e_p,R\n";
    for (const auto& r :
         kernels::decoy_sweep(params, protocol, kernels::distance_grid(o.l_min, o.l_max, o.l_step)))
        out += csv({r.distance_km, r.mu, r.obs.q_mu, r.obs.e_mu, r.obs.q1, r.obs.e1, r.e_p,
                    r.exported_rate()});
    return out;
}

std::string cmd_simulate(const Options& o) {
    SimConfig config;
    config.n = o.n;
    config.delta = o.delta;
    config.seed = o.seed;
    config.attack = parse_attack(o.attack);
    const ProtocolStats stats = run_protocol(config);
    json j{{"stats", stats}, {"azuma", azuma_check(stats, config.attack)}};
    return j.dump(2) + '\n';
}

json collect_parameters(const CLI::App& sub) {
    json p = json::object();
    for (const CLI::Option* opt : sub.get_options()) {
        const std::string name = opt->get_single_name();
        if (name == "help" || name == "out" || name == "manifest") continue;
        p[name] = opt->count() > 0 ? opt->as<std::string>() : opt->get_default_str();
    }
    return p;
}

// Drops --out/--manifest (and their values) so the recorded args reproduce the payload only.
std::vector<std::string> reproducible_args(const std::vector<std::string>& args) {
    std::vector<std::string> kept;
    for (std::size_t i = 0; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a == "--out" || a == "--manifest") {
            ++i;
            continue;
        }
        if (a.rfind("--out=", 0) == 0 || a.rfind("--manifest=", 0) == 0) continue;
        kept.push_back(a);
    }
    return kept;
}

int exit_code_for(std::exception_ptr ep, std::ostream& err) {
    try {
        std::rethrow_exception(ep);
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kParseError;
    } catch (const InsufficientSift& e) {
        err << "simulation error: " << e.what() << '\n';
        return kSimulationError;
    } catch (const SamplingError& e) {
        err << "simulation error: " << e.what() << '\n';
        return kSimulationError;
    } catch (const std::domain_error& e) {
        err << "domain error: " << e.what() << '\n';
        return kDomainError;
    } catch (const std::invalid_argument& e) {
        err << "domain error: " << e.what() << '\n';
        return kDomainError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kFailure;
    }
}

void add_output_options(CLI::App* sub, Options& o) {
    sub->add_option("--out", o.out_path, "Write output to FILE (default stdout)");
    sub->add_option("--manifest", o.manifest_path,
                    "Manifest path (default FILE.manifest.json when --out is given)");
}

// Parses and executes; `result` holds the payload on success.
int execute(const std::vector<std::string>& args, Options& o, Result& result, std::ostream& out,
            std::ostream& err) {
    CLI::App app{"Three-state QKD phase-error bounds, key rates and protocol simulation", "qkd3"};
    app.set_version_flag("--version", QKD3_VERSION);
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default();

    auto* bound = app.add_subcommand("bound", "Phase error bounds at one (e_b, alpha) point");
    bound->add_option("--eb", o.eb, "Z-basis bit error rate")->required();
    bound->add_option("--alpha", o.alpha, "|+> check-state error rate")->required();
    bound->add_option("--method", o.bound_method, "Bound reported as 'ep'")
        ->check(CLI::IsMember({"exact", "approx", "simple"}));

    auto* fig1 = app.add_subcommand("fig1", "Bounds on the diagonal e_b = alpha (CSV)");
    fig1->add_option("--eb-max", o.eb_max, "Largest e_b")->check(CLI::Range(0.0, 0.5));
    fig1->add_option("--steps", o.fig1_steps, "Grid points")->check(CLI::Range(2, 1000000));

    auto* region = app.add_subcommand("region", "Secure-region frontier (CSV)");
    region->add_option("--steps", o.region_steps, "alpha grid points")->check(CLI::Range(2, 1000000));
    region->add_option("--method", o.region_method, "Phase error bound")
        ->check(CLI::IsMember({"exact", "approx"}));

    auto* decoy = app.add_subcommand("decoy", "Decoy-state key rate versus distance (CSV)");
    decoy->add_option("--protocol", o.protocol, "three-state or bb84")
        ->check(CLI::IsMember({"three-state", "bb84"}));
    decoy->add_option("--L-min", o.l_min, "First distance (km)");
    decoy->add_option("--L-max", o.l_max, "Last distance (km)");
    decoy->add_option("--L-step", o.l_step, "Distance step (km)");
    decoy->add_option("--params", o.params_file, "Channel parameter file (key = value)");

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo protocol run (JSON)");
    simulate->add_option("--N", o.n, "Data bits");
    simulate->add_option("--delta", o.delta, "Oversampling fraction");
    simulate->add_option("--seed", o.seed, "RNG seed");
    simulate->add_option("--attack", o.attack, "8 comma-separated decimals: Re/Im of a_I,a_X,a_Y,a_Z");

    auto* replay = app.add_subcommand("replay", "Re-run a manifest and compare output checksums");
    replay->add_option("manifest", o.replay_manifest, "Manifest JSON")->required();

    for (auto* sub : {bound, fig1, region, decoy, simulate}) add_output_options(sub, o);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::CallForVersion&) {
        out << QKD3_VERSION << '\n';
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kParseError;
    }

    const CLI::App* sub = app.get_subcommands().front();
    result.subcommand = sub->get_name();
    if (result.subcommand == "replay") return kOk;
    result.args = reproducible_args(args);
    result.parameters = collect_parameters(*sub);
    try {
        if (sub == bound) {
            result.payload = cmd_bound(o);
        } else if (sub == fig1) {
            result.payload = cmd_fig1(o);
        } else if (sub == region) {
            result.payload = cmd_region(o);
        } else if (sub == decoy) {
            result.payload = cmd_decoy(o);
        } else {
            result.seeds.push_back(o.seed);
            result.payload = cmd_simulate(o);
        }
    } catch (...) {
        return exit_code_for(std::current_exception(), err);
    }
    return kOk;
}

json manifest_for(const Result& r) {
    return json{
        {"subcommand", r.subcommand},
        {"args", r.args},
        {"parameters", r.parameters},
        {"seeds", r.seeds},
        {"tool_version", QKD3_VERSION},
        {"output_sha256", sha256_hex(r.payload)},
    };
}

bool write_file(const std::string& path, const std::string& data, std::ostream& err) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    f << data;
    if (!f) {
        err << "error: cannot write " << path << '\n';
        return false;
    }
    return true;
}

int run_replay(const std::string& manifest_path, std::ostream& out, std::ostream& err) {
    json manifest;
    try {
        std::ifstream in(manifest_path);
        if (!in) throw ParseError("cannot read manifest " + manifest_path);
        manifest = json::parse(in);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kParseError;
    }
    const auto args = manifest.at("args").get<std::vector<std::string>>();
    Options o;
    Result r;
    std::ostringstream sink;
    if (const int code = execute(args, o, r, sink, err); code != kOk) return code;
    const std::string expected = manifest.at("output_sha256").get<std::string>();
    const std::string actual = sha256_hex(r.payload);
    if (actual != expected) {
        out << "mismatch " << actual << " != " << expected << '\n';
        return kFailure;
    }
    out << "match " << actual << '\n';
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    kernels::apply_thread_limit_from_env();
    Options o;
    Result r;
    if (const int code = execute(args, o, r, out, err); code != kOk) return code;
    if (r.subcommand.empty()) return kOk;  // help / version
    if (r.subcommand == "replay") return run_replay(o.replay_manifest, out, err);

    if (o.out_path.empty()) {
        out << r.payload;
    } else if (!write_file(o.out_path, r.payload, err)) {
        return kFailure;
    }
    std::string manifest_path = o.manifest_path;
    if (manifest_path.empty() && !o.out_path.empty()) manifest_path = o.out_path + ".manifest.json";
    if (!manifest_path.empty() && !write_file(manifest_path, manifest_for(r).dump(2) + '\n', err))
        return kFailure;
    return kOk;
}

}  // namespace qkd3::cli
