// smprod: command-line front end for singular moduli products.
//
//   smprod forms -15
//   smprod hcp -23 --format table
//   smprod tables 2
//   smprod certify --output cert.json
//   smprod solve -254358061056000 --certificate cert.json

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "smprod/smprod.hpp"

namespace {

using smprod::ordered_json;

constexpr int schema_version = 1;
constexpr int exit_usage = 2;
constexpr int exit_certification = 3;
constexpr int exit_internal = 4;

struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string command;
    std::string arg;
    long precision = 128;
    std::string cache;
    std::string format = "json";
    bool trust = false;
    std::string certificate;
    std::string output;
};

// U+2212 MINUS SIGN is accepted wherever '-' is.
std::string normalize_minus(std::string s) {
    const std::string minus = "\xE2\x88\x92";
    for (auto pos = s.find(minus); pos != std::string::npos; pos = s.find(minus, pos)) s.replace(pos, minus.size(), "-");
    return s;
}

long parse_long(const std::string& text, const char* what) {
    try {
        std::size_t used = 0;
        const long v = std::stol(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw usage_error(std::string("expected an integer ") + what + ", got '" + text + "'");
    }
}

smprod::Discriminant parse_discriminant(const std::string& text) {
    const long v = parse_long(text, "discriminant");
    if (!smprod::Discriminant::is_valid(v)) throw usage_error("not a discriminant (negative, 0 or 1 mod 4): " + text);
    return smprod::Discriminant(v);
}

mpq_class parse_rational(const std::string& text) {
    mpq_class q;
    if (text.empty() || q.set_str(text, 10) != 0) throw usage_error("expected an integer or p/q, got '" + text + "'");
    if (q.get_den() == 0) throw usage_error("zero denominator in '" + text + "'");
    q.canonicalize();
    return q;
}

// Decimal such as "-0.25" or "1.5e-3" as an exact rational.
mpq_class parse_decimal(const std::string& text) {
    std::string mantissa = text;
    long exponent = 0;
    if (const auto e = text.find_first_of("eE"); e != std::string::npos) {
        mantissa = text.substr(0, e);
        exponent = parse_long(text.substr(e + 1), "exponent");
    }
    bool negative = false;
    if (!mantissa.empty() && (mantissa[0] == '-' || mantissa[0] == '+')) {
        negative = mantissa[0] == '-';
        mantissa.erase(0, 1);
    }
    std::string digits;
    long fraction = 0;
    bool seen_dot = false;
    for (char ch : mantissa) {
        if (ch == '.' && !seen_dot) {
            seen_dot = true;
        } else if (ch >= '0' && ch <= '9') {
            digits += ch;
            if (seen_dot) ++fraction;
        } else {
            throw usage_error("expected a decimal number, got '" + text + "'");
        }
    }
    if (digits.empty()) throw usage_error("expected a decimal number, got '" + text + "'");
    mpz_class num(digits), scale;
    const long shift = exponent - fraction;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
    mpq_class q = shift < 0 ? mpq_class(num, scale) : mpq_class(num * scale);
    q.canonicalize();
    return negative ? mpq_class(-q) : q;
}

ordered_json form_json(const smprod::FormTriple& f) { return {f.a, f.b, f.c}; }

std::string ball_display(const smprod::Ball& b, int digits) {
    return b.mid().to_string(digits) + " ± " + b.rad().to_string(3, MPFR_RNDU);
}

ordered_json complex_json(const smprod::ComplexBall& z, int digits) {
    ordered_json j;
    j["re"] = z.re.mid().to_string(digits);
    j["re_radius"] = z.re.rad().to_string(3, MPFR_RNDU);
    j["im"] = z.im.mid().to_string(digits);
    j["im_radius"] = z.im.rad().to_string(3, MPFR_RNDU);
    j["display"] = "(" + ball_display(z.re, digits) + ") + (" + ball_display(z.im, digits) + ")i";
    return j;
}

int display_digits(long precision) { return static_cast<int>(static_cast<double>(precision) * 0.30103) + 1; }

class Runner {
public:
    explicit Runner(Options o) : opt_(std::move(o)) {
        std::optional<smprod::HcpCache> cache;
        if (!opt_.cache.empty()) {
            cache.emplace(opt_.cache);
        } else {
            cache = smprod::HcpCache::from_environment();
        }
        if (cache) {
            hcp_ = [c = *cache](smprod::Discriminant d) { return c.get_or_compute(d); };
        } else {
            hcp_ = smprod::default_hcp_provider();
        }
    }

    // Fills payload/table/warnings; returns the exit status.
    int run() {
        const std::string& c = opt_.command;
        if (c == "forms") return forms();
        if (c == "classnum") return classnum();
        if (c == "j") return j();
        if (c == "hcp") return hcp();
        if (c == "tables") return tables();
        if (c == "certify") return certify();
        if (c == "solve") return solve();
        throw usage_error("unknown command " + c);
    }

    ordered_json payload = ordered_json::object();
    std::ostringstream table;
    std::vector<std::string> warnings;

private:
    int forms() {
        const auto d = parse_discriminant(opt_.arg);
        ordered_json fs = ordered_json::array();
        for (const auto& f : smprod::enumerate_forms(d)) {
            fs.push_back(form_json(f));
            table << f.to_string() << '\n';
        }
        payload["delta"] = d.value();
        payload["h"] = fs.size();
        payload["forms"] = std::move(fs);
        return 0;
    }

    int classnum() {
        const auto d = parse_discriminant(opt_.arg);
        const int h = smprod::class_number(d);
        payload["delta"] = d.value();
        payload["h"] = h;
        table << "h(" << d.value() << ") = " << h << '\n';
        return 0;
    }

    int j() {
        if (opt_.precision < 64) throw usage_error("--precision must be at least 64");
        const auto prec = static_cast<mpfr_prec_t>(opt_.precision);
        const int digits = display_digits(opt_.precision);
        payload["precision"] = opt_.precision;
        ordered_json points = ordered_json::array();
        if (const auto comma = opt_.arg.find(','); comma != std::string::npos) {
            const mpq_class re = parse_decimal(opt_.arg.substr(0, comma));
            const mpq_class im = parse_decimal(opt_.arg.substr(comma + 1));
            if (im <= 0) throw usage_error("Im z must be positive");
            std::optional<smprod::FundamentalPoint> z;
            try {
                z = smprod::FundamentalPoint::from_rationals(re, im);
            } catch (const smprod::outside_domain&) {
                const long wp = opt_.precision + 512;
                const smprod::ComplexBall exact(smprod::Ball::from_rational(re, wp), smprod::Ball::from_rational(im, wp));
                z = smprod::FundamentalPoint::from_ball(smprod::reduce_to_fundamental_domain(exact));
                warnings.push_back("z reduced into the fundamental domain before evaluation");
            }
            const auto value = smprod::eval_j(*z, prec);
            ordered_json p;
            p["z"] = {re.get_str(), im.get_str()};
            p["j"] = complex_json(value, digits);
            table << "j(" << opt_.arg << ") = " << p["j"]["display"].get<std::string>() << '\n';
            points.push_back(std::move(p));
        } else {
            const auto d = parse_discriminant(opt_.arg);
            payload["delta"] = d.value();
            for (const auto& f : smprod::enumerate_forms(d)) {
                const auto value = smprod::eval_j(smprod::FundamentalPoint::from_form(d, f), prec);
                ordered_json p;
                p["form"] = form_json(f);
                p["j"] = complex_json(value, digits);
                table << "j" << f.to_string() << " = " << p["j"]["display"].get<std::string>() << '\n';
                points.push_back(std::move(p));
            }
        }
        payload["points"] = std::move(points);
        return 0;
    }

    int hcp() {
        const auto d = parse_discriminant(opt_.arg);
        const auto p = hcp_(d);
        payload = smprod::to_json(p);
        payload["degree"] = p.degree();
        payload["polynomial"] = p.to_string();
        table << p.to_string() << '\n';
        return 0;
    }

    int tables() {
        const long which = parse_long(opt_.arg, "table number");
        ordered_json rows = ordered_json::array();
        payload["table"] = which;
        if (which == 1) {
            table << "D\tj\n";
            for (const auto& v : smprod::rational_values(hcp_)) {
                rows.push_back({{"delta", v.delta.value()}, {"j", v.j.get_str()}});
                table << v.delta.value() << '\t' << v.j.get_str() << '\n';
            }
        } else if (which == 2) {
            table << "D\tH_D(x)\ta0/a1^2\n";
            for (const auto& d : smprod::discriminants_with_class_number(2, smprod::certificate_scan_bound)) {
                const auto p = hcp_(d);
                const auto r = smprod::ratio_vector(p).front();
                ordered_json row = smprod::to_json(p);
                row["polynomial"] = p.to_string();
                row["ratio"] = r.to_string();
                row["ratio_approx"] = smprod::scientific(r.value);
                table << d.value() << '\t' << p.to_string() << '\t' << smprod::scientific(r.value) << '\n';
                rows.push_back(std::move(row));
            }
            warnings.push_back("class number 2 list scanned to |D| <= " + std::to_string(smprod::certificate_scan_bound));
        } else if (which == 3) {
            table << "D\tLHS\tRHS\n";
            for (const auto& row : smprod::distinct_fields_table()) {
                const std::string lhs = row.lhs.mid().to_fixed(8), rhs = row.rhs.mid().to_fixed(8);
                rows.push_back({{"delta", row.delta}, {"lhs", lhs}, {"rhs", rhs}});
                table << row.delta << '\t' << lhs << '\t' << rhs << '\n';
            }
        } else if (which == 4) {
            table << "field\th\tdiscriminants\n";
            for (const auto& e : smprod::field_table()) {
                rows.push_back({{"field", e.field}, {"h", e.degree}, {"discriminants", e.discriminants}});
                table << e.field << '\t' << e.degree << '\t';
                for (std::size_t i = 0; i < e.discriminants.size(); ++i) {
                    table << (i ? "," : "") << e.discriminants[i];
                }
                table << '\n';
            }
        } else {
            throw usage_error("tables takes 1, 2, 3 or 4");
        }
        payload["rows"] = std::move(rows);
        return 0;
    }

    int certify() {
        smprod::CertifyOptions options;
        options.hcp = hcp_;
        const auto cert = smprod::run_certification(options);
        payload = cert.to_json();
        for (const auto& t : payload["trusted_assumptions"]) warnings.push_back("trusted: " + t.get<std::string>());
        warnings.push_back("scan-bounded: |D| <= " + std::to_string(cert.scan_bound));
        for (const auto& c : cert.cases) {
            table << smprod::to_string(c.id) << '\t' << (c.closed() ? "closed" : "OPEN") << '\t' << c.candidates.size()
                  << " candidates\t" << c.survivors() << " survivors\n";
            for (const auto& f : c.failures) table << "  failure: " << f << '\n';
        }
        table << "all cases closed: " << (cert.closed() ? "yes" : "no") << '\n';
        if (!opt_.output.empty()) {
            std::ofstream out(opt_.output, std::ios::trunc);
            if (!out) throw usage_error("cannot write " + opt_.output);
            out << payload.dump(2) << '\n';
        }
        return cert.closed() ? 0 : exit_certification;
    }

    int solve() {
        const mpq_class a = parse_rational(opt_.arg);
        std::optional<smprod::ProductSolver> solver;
        if (!opt_.certificate.empty()) {
            std::ifstream in(opt_.certificate);
            if (!in) throw usage_error("cannot read certificate " + opt_.certificate);
            const auto doc = nlohmann::json::parse(in, nullptr, false);
            solver.emplace(smprod::ProductSolver::certified(doc, hcp_));
        } else if (opt_.trust) {
            solver.emplace(smprod::ProductSolver::trusting(hcp_));
            warnings.push_back("answer relies on --trust-certificate; no certificate was checked");
        } else {
            throw smprod::certificate_required("solve needs --certificate <file> or --trust-certificate");
        }
        const auto sols = solver->solve(a);
        payload["A"] = a.get_str();
        payload["in_S"] = !sols.empty();
        ordered_json js = ordered_json::array();
        for (const auto& s : sols) {
            js.push_back(s.to_json());
            table << smprod::to_string(s.kind) << '\t' << s.first.delta.value() << '\t' << s.second.delta.value() << '\t'
                  << (s.kind == smprod::SolutionKind::rational ? s.first.value->get_str() + " * " + s.second.value->get_str()
                                                               : s.first.minimal_poly.to_string())
                  << '\n';
        }
        if (sols.empty()) table << "no pairs\n";
        payload["solutions"] = std::move(js);
        return 0;
    }

    Options opt_;
    smprod::HcpProvider hcp_;
};

std::string join(const std::vector<std::string>& args) {
    std::string out;
    for (const auto& a : args) out += (out.empty() ? "" : " ") + a;
    return out;
}

ordered_json envelope(const std::string& command, ordered_json payload, const std::vector<std::string>& warnings) {
    ordered_json j;
    j["command"] = command;
    j["schema_version"] = schema_version;
    j["payload"] = std::move(payload);
    j["warnings"] = warnings;
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.push_back(normalize_minus(argv[i]));

    Options opt;
    CLI::App app{"Products of singular moduli: forms, j values, class polynomials, certificate, solver", "smprod"};
    app.require_subcommand(1);
    app.add_option("--precision", opt.precision, "working precision in bits for j")->capture_default_str();
    app.add_option("--cache", opt.cache, std::string("class polynomial cache file (default $") + smprod::cache_env_var + ")");
    app.add_option("--format", opt.format, "output format")->check(CLI::IsMember({"json", "table"}))->capture_default_str();

    struct Sub {
        const char* name;
        const char* help;
        const char* arg;
    };
    const Sub subs[] = {
        {"forms", "reduced primitive forms of discriminant D", "D"},
        {"classnum", "class number h(D)", "D"},
        {"j", "j at every form of D, or at z given as re,im", "point"},
        {"hcp", "Hilbert class polynomial H_D", "D"},
        {"tables", "reproduce table 1, 2, 3 or 4", "N"},
        {"certify", "run the case analysis and emit the certificate", nullptr},
        {"solve", "all pairs with j(tau1) j(tau2) = A", "A"},
    };
    for (const auto& s : subs) {
        auto* sub = app.add_subcommand(s.name, s.help);
        sub->fallthrough();
        sub->callback([&opt, name = s.name] { opt.command = name; });
        if (s.arg != nullptr) sub->add_option(s.arg, opt.arg, s.arg)->required();
        if (std::string(s.name) == "certify") sub->add_option("--output", opt.output, "also write the certificate here");
        if (std::string(s.name) == "solve") {
            sub->add_option("--certificate", opt.certificate, "certificate written by `smprod certify --output`");
            sub->add_flag("--trust-certificate", opt.trust, "answer without checking a certificate");
        }
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_usage;
    }

    const std::string command = join(args);
    Runner runner(opt);
    try {
        const int status = runner.run();
        if (opt.format == "table") {
            std::cout << runner.table.str();
        } else {
            std::cout << envelope(command, std::move(runner.payload), runner.warnings).dump(2) << '\n';
        }
        return status;
    } catch (const usage_error& e) {
        std::cerr << "smprod: " << e.what() << '\n';
        return exit_usage;
    } catch (const smprod::invalid_discriminant& e) {
        std::cerr << "smprod: " << e.what() << '\n';
        return exit_usage;
    } catch (const smprod::invalid_argument& e) {
        std::cerr << "smprod: " << e.what() << '\n';
        return exit_usage;
    } catch (const smprod::zero_not_supported& e) {
        std::cerr << "smprod: " << e.what() << '\n';
        return exit_usage;
    } catch (const smprod::certificate_required& e) {
        std::cerr << "smprod: " << e.what() << '\n';
        return exit_usage;
    } catch (const smprod::certification_failure& e) {
        std::cerr << "smprod: certification failure: " << e.what() << '\n';
        std::cout << envelope(command, {{"error", {{"type", "certification_failure"}, {"message", e.what()}}}}, {}).dump(2)
                  << '\n';
        return exit_certification;
    } catch (const std::exception& e) {
        std::cerr << "smprod: internal error: " << e.what() << '\n';
        std::cout << envelope(command, {{"error", {{"type", "internal"}, {"message", e.what()}}}}, {}).dump(2) << '\n';
        return exit_internal;
    }
}
