// pftl: experiment drivers for pure number fields Q(a^(1/d)).
//
//   pftl field --d 3 --a 150
//   pftl bounds --d 3 --a 2 --ell 3
//   pftl fdl-family --d 3 --ell 2 --A-max 1000 --csv
//   pftl growth --d 3 --a 2 --a 3 --X 2 --X 4 --X 8
//   pftl primes --d 3 --a 2 --delta 0.5 --eps 0.1
//   pftl enumerate --d 3 --a 2 --X 2.5
//   pftl mkl --d 3 --a 2 --ell 2 --X 4 --X 8 --X 16

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "pftl/pftl.hpp"

namespace {

using namespace pftl;
using cli::Json;

struct Config {
    int d = 3;
    std::vector<std::string> a_text;
    int ell = 2;
    std::vector<std::string> x_text;
    std::string delta_text, eps_text;
    long prec_bits = kDefaultPrecBits;
    unsigned workers = 1;
    std::uint64_t limit = EnumerateOptions{}.limit;
    bool json = false, csv = false;
    std::string out;
    std::string disc = "best";
    long a_max = 1000;
    std::string eta_cap_text = "10000";

    // parsed
    std::vector<Integer> as;
    std::vector<Rational> xs;
    Rational delta, eps, eta_cap;

    EnumerateOptions enumerate_options() const {
        EnumerateOptions o;
        o.prec = static_cast<mpfr_prec_t>(prec_bits);
        o.max_prec = std::max<mpfr_prec_t>(1024, 8 * o.prec);
        o.workers = workers;
        o.limit = limit;
        return o;
    }
};

Integer parse_integer(const std::string& text) {
    Integer n;
    if (text.empty() || n.set_str(text, 10) != 0) throw DomainError("not an integer: '" + text + "'");
    return n;
}

long default_prec_bits() {
    const char* env = std::getenv("PFTL_PREC_BITS");
    if (!env) return kDefaultPrecBits;
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0') throw DomainError(std::string("PFTL_PREC_BITS is not an integer: '") + env + "'");
    return v;
}

void validate(Config& c, const std::string& command) {
    if (c.prec_bits < 53 || c.prec_bits > 65536)
        throw DomainError("--prec-bits must lie in [53, 65536], got " + std::to_string(c.prec_bits));
    if (c.workers < 1) throw DomainError("--workers must be >= 1");
    if (c.limit < 1) throw DomainError("--limit must be >= 1");
    if (c.json && c.csv) throw DomainError("--json and --csv are exclusive");
    check_degree(c.d);
    for (const auto& t : c.a_text) {
        c.as.push_back(parse_integer(t));
        if (c.as.back() < 1) throw DomainError("radicand must be positive, got " + t);
    }
    for (const auto& t : c.x_text) c.xs.push_back(parse_rational(t));
    if (!c.delta_text.empty()) c.delta = parse_rational(c.delta_text);
    if (!c.eps_text.empty()) c.eps = parse_rational(c.eps_text);
    c.eta_cap = parse_rational(c.eta_cap_text);
    if (c.ell < 1) throw DomainError("--ell must be >= 1");
    if (command != "fdl-family" && c.as.empty()) throw DomainError("--a is required");
    if (command != "fdl-family" && command != "growth" && c.as.size() != 1)
        throw DomainError(command + " takes exactly one --a");
    if ((command == "growth" || command == "enumerate" || command == "mkl") && c.xs.empty())
        throw DomainError("--X is required");
    if (command == "enumerate" && c.xs.size() != 1) throw DomainError("enumerate takes exactly one --X");
    if (command == "primes" && (c.delta_text.empty() || c.eps_text.empty()))
        throw DomainError("primes needs --delta and --eps");
    if (command == "fdl-family" && 2 * c.ell < c.d)
        throw DomainError("fdl-family needs ell >= d/2, got ell = " + std::to_string(c.ell));
    if (command == "mkl" && !(c.eta_cap > 1)) throw DomainError("--eta-cap must exceed 1");
}

std::string run(const Config& c, const std::string& command) {
    auto dump = [](const Json& j) { return j.dump(2) + "\n"; };
    const auto opts = c.enumerate_options();
    if (command == "field") return dump(cli::cmd_field(c.d, c.as[0]));
    if (command == "bounds") return dump(cli::cmd_bounds(c.d, c.as[0], c.ell));
    if (command == "fdl-family") {
        const auto rows = cli::fdl_family(c.d, c.ell, c.a_max, static_cast<mpfr_prec_t>(c.prec_bits));
        return c.json ? dump(cli::fdl_json(c.d, c.ell, rows)) : cli::fdl_csv(c.d, c.ell, rows);
    }
    if (command == "growth")
        return c.json ? dump(cli::cmd_growth_json(c.d, c.as, c.xs, opts)) : cli::cmd_growth_csv(c.d, c.as, c.xs, opts);
    if (command == "primes") {
        const auto choice = c.disc == "lower" ? DiscChoice::Lower : DiscChoice::Best;
        const Json j = cli::cmd_primes(c.d, c.as[0], c.delta, c.eps, choice);
        return c.csv ? cli::primes_csv(j) : dump(j);
    }
    if (command == "enumerate") {
        const Json j = cli::cmd_enumerate(c.d, c.as[0], c.xs[0], opts);
        return c.csv ? cli::witnesses_csv(j) : dump(j);
    }
    return dump(cli::cmd_mkl(c.d, c.as[0], c.ell, c.xs, opts, c.eta_cap));
}

}  // namespace

int main(int argc, char** argv) {
    Config cfg;
    try {
        cfg.prec_bits = default_prec_bits();
    } catch (const std::exception& e) {
        std::cerr << "pftl: " << e.what() << "\n";
        return cli::kConfigError;
    }

    CLI::App app{"Heights, discriminants and good primes of pure number fields"};
    app.require_subcommand(1);
    const std::vector<std::string> commands{"field", "bounds", "fdl-family", "growth", "primes", "enumerate", "mkl"};
    for (const auto& name : commands) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--d", cfg.d, "odd degree")->capture_default_str();
        if (name != "fdl-family") sub->add_option("--a", cfg.a_text, "radicand (repeatable for growth)");
        if (name == "bounds" || name == "fdl-family" || name == "mkl")
            sub->add_option("--ell", cfg.ell, "torsion exponent")->capture_default_str();
        if (name == "growth" || name == "enumerate" || name == "mkl")
            sub->add_option("--X", cfg.x_text, "height threshold (repeatable)");
        if (name == "primes") {
            sub->add_option("--delta", cfg.delta_text, "norm bound exponent");
            sub->add_option("--eps", cfg.eps_text, "count exponent slack");
            sub->add_option("--disc", cfg.disc, "discriminant value used")
                ->check(CLI::IsMember({"best", "lower"}))
                ->capture_default_str();
        }
        if (name == "fdl-family") sub->add_option("--A-max", cfg.a_max, "largest A_{d-1}")->capture_default_str();
        if (name == "mkl")
            sub->add_option("--eta-cap", cfg.eta_cap_text, "height cap for the minimal generator search")
                ->capture_default_str();
        sub->add_option("--prec-bits", cfg.prec_bits, "working precision (default from PFTL_PREC_BITS)")
            ->capture_default_str();
        if (name == "growth" || name == "enumerate" || name == "mkl") {
            sub->add_option("--workers", cfg.workers, "enumeration threads")->capture_default_str();
            sub->add_option("--limit", cfg.limit, "enumeration work limit in rows")->capture_default_str();
        }
        sub->add_flag("--json", cfg.json, "JSON output");
        sub->add_flag("--csv", cfg.csv, "CSV output");
        sub->add_option("--out", cfg.out, "output file (default stdout)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? cli::kOk : cli::kConfigError;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    try {
        validate(cfg, command);
        const std::string text = run(cfg, command);
        if (cfg.out.empty()) {
            std::cout << text;
        } else {
            std::ofstream f(cfg.out, std::ios::binary);
            if (!f) throw DomainError("cannot open " + cfg.out + " for writing");
            f << text;
            if (!f) throw ResourceError("failed writing " + cfg.out);
        }
    } catch (const std::exception& e) {
        std::cerr << "pftl: " << e.what() << "\n";
        return cli::exit_code_for(e);
    }
    return cli::kOk;
}
