#pragma once

// Command-line front end. run_cli is the whole program minus main(), so the
// test suite can drive it in-process.
//
// Exit codes: 0 success, 1 domain error, 2 usage error.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dwline/dwline.hpp"

namespace dwline::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Format { Plain, Csv };

struct Config {
    std::string group_spec;
    std::optional<long long> level;
    std::string cocycle_file;
    std::size_t genus = 1;
    std::string rep;
    std::string matrix;
    long long element = -1;
    long long n = 0;
    std::optional<long long> window;
    std::string file;
    std::string format = "plain";
};

inline std::vector<long long> parse_int_list(const std::string& flag, const std::string& text, std::size_t expected) {
    std::vector<long long> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t pos = 0;
        long long v = 0;
        try {
            v = std::stoll(item, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (item.empty() || pos != item.size()) throw UsageError(flag + ": '" + text + "' is not a comma-separated integer list");
        out.push_back(v);
    }
    if (out.size() != expected) throw UsageError(flag + ": expected " + std::to_string(expected) + " integers, got '" + text + "'");
    return out;
}

inline SL2Z parse_matrix(const std::string& text) {
    const auto v = parse_int_list("--matrix", text, 4);
    return SL2Z(v[0], v[1], v[2], v[3]);
}

inline GroupPtr load_group(const Config& cfg) { return share(group_from_spec(cfg.group_spec)); }

/// The 3-cocycle chosen by --level (cyclic groups) or --cocycle <file>.
inline CochainPtr load_alpha(const Config& cfg, const GroupPtr& G) {
    if (cfg.level && !cfg.cocycle_file.empty()) throw UsageError("--level and --cocycle are mutually exclusive");
    if (!cfg.level && cfg.cocycle_file.empty()) throw UsageError("one of --level or --cocycle is required");
    if (cfg.level) {
        if (cfg.group_spec.rfind("cyclic:", 0) != 0)
            throw InvalidInput("--level applies to cyclic:n groups; use --cocycle <file> for " + cfg.group_spec);
        return share(alpha_cyclic(G->order(), *cfg.level));
    }
    std::ifstream in(cfg.cocycle_file);
    if (!in) throw InvalidInput("cannot open cocycle file '" + cfg.cocycle_file + "'");
    Cochain c = parse_cochain_text(in);
    if (!(c.group() == *G)) throw InvalidInput("cocycle file group does not match --group " + cfg.group_spec);
    if (c.degree() != 3) throw InvalidInput("cocycle file must hold a degree-3 cochain");
    return share(Cochain(G, 3) + c);
}

inline std::string yes(bool b) { return b ? "true" : "false"; }

inline std::string join(const std::vector<Element>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

inline int cmd_verify_alpha(const Config& cfg, Format fmt, std::ostream& out) {
    const GroupPtr G = load_group(cfg);
    const CochainPtr alpha = load_alpha(cfg, G);
    const auto report = validate_cochain(*alpha);
    std::string exact = "n/a", order = "n/a";
    if (report.closed) {
        const auto m = class_order(*alpha, G->order());
        exact = yes(m == 1);
        order = m ? std::to_string(*m) : "n/a";
    }
    if (fmt == Format::Csv) {
        out << "closed,normalized,exact,class_order\n" << yes(report.closed) << "," << yes(report.normalized) << "," << exact << "," << order << "\n";
    } else {
        out << "closed: " << yes(report.closed) << "\nnormalized: " << yes(report.normalized) << "\nexact: " << exact << "\nclass-order: " << order << "\n";
    }
    return report.closed && report.normalized ? kExitOk : kExitDomain;
}

inline int cmd_enumerate(const Config& cfg, Format fmt, std::ostream& out) {
    const GroupPtr G = load_group(cfg);
    const auto reps = enumerate_bundles(G, cfg.genus);
    if (fmt == Format::Csv) {
        for (std::size_t i = 0; i < cfg.genus; ++i) out << (i ? "," : "") << "g" << i + 1 << ",h" << i + 1;
        out << "\n";
        for (const auto& r : reps) out << join(r.images) << "\n";
    } else {
        for (const auto& r : reps) out << join(r.images) << "\n";
        out << "total: " << reps.size() << "\n";
    }
    return kExitOk;
}

inline int cmd_orbits(const Config& cfg, Format fmt, std::ostream& out) {
    const GroupPtr G = load_group(cfg);
    const auto reps = orbit_representatives(G, cfg.genus);
    if (fmt == Format::Csv) out << "rep,orbit_size,stabilizer_order\n";
    for (const auto& r : reps) {
        const auto os = orbit_stabilizer(r);
        if (fmt == Format::Csv)
            out << "\"" << join(r.images) << "\"," << os.orbit.size() << "," << os.stabilizer.size() << "\n";
        else
            out << "rep " << join(r.images) << " orbit " << os.orbit.size() << " stabilizer " << os.stabilizer.size() << "\n";
    }
    if (fmt == Format::Plain) out << "orbits: " << reps.size() << "\n";
    return kExitOk;
}

inline int cmd_character(const Config& cfg, Format fmt, std::ostream& out) {
    const GroupPtr G = load_group(cfg);
    const CochainPtr alpha = load_alpha(cfg, G);
    const auto gh = parse_int_list("--rep", cfg.rep, 2);
    if (gh[0] < 0 || gh[1] < 0) throw InvalidInput("--rep: element indices must be non-negative");
    const TorusRep rep(G, static_cast<Element>(gh[0]), static_cast<Element>(gh[1]));
    const SL2Z A = parse_matrix(cfg.matrix);
    long long W = cfg.window.value_or(default_window(A.max_abs_entry()));
    std::optional<QZ> value;
    for (;;) {
        try {
            value = r_diff(rep, alpha, A, LiftOptions{W, LiftPath::Auto});
            break;
        } catch (const WindowError&) {
            if (W + 2 > kMaxLiftWindow) throw;
            W += 2;
        }
    }
    if (fmt == Format::Csv)
        out << "g,h,a,b,c,d,value,stabilizes\n"
            << gh[0] << "," << gh[1] << "," << A.a() << "," << A.b() << "," << A.c() << "," << A.d() << "," << value->str() << "," << yes(stabilizes(A, rep))
            << "\n";
    else
        out << value->str() << "\n";
    return kExitOk;
}

inline int cmd_klein(const Config& cfg, Format fmt, std::ostream& out) {
    if (cfg.n <= 0) throw UsageError("--n must be a positive integer");
    if (!cfg.level) throw UsageError("--level is required");
    const SL2Z A = parse_matrix(cfg.matrix);
    const QZ v = klein_character(cfg.n, *cfg.level, A);
    if (fmt == Format::Csv)
        out << "n,level,a,b,c,d,value\n" << cfg.n << "," << *cfg.level << "," << A.a() << "," << A.b() << "," << A.c() << "," << A.d() << "," << v.str() << "\n";
    else
        out << v.str() << "\n";
    return kExitOk;
}

inline int cmd_dehn(const Config& cfg, Format fmt, std::ostream& out) {
    const GroupPtr G = load_group(cfg);
    const CochainPtr alpha = load_alpha(cfg, G);
    if (cfg.element < 0) throw UsageError("--elt must be a non-negative element index");
    const auto g = static_cast<Element>(cfg.element);
    const QZ v = dehn_character(*G, g, *alpha);
    if (fmt == Format::Csv)
        out << "elt,order,value\n" << g << "," << G->element_order(g) << "," << v.str() << "\n";
    else
        out << v.str() << "\n";
    return kExitOk;
}

inline int cmd_dim(const Config& cfg, Format fmt, std::ostream& out) {
    const GroupPtr G = load_group(cfg);
    const CochainPtr alpha = load_alpha(cfg, G);
    const std::size_t d = sections_dimension(G, alpha, LiftOptions{cfg.window, LiftPath::Auto});
    if (fmt == Format::Csv)
        out << "dimension\n" << d << "\n";
    else
        out << d << "\n";
    return kExitOk;
}

inline int cmd_groupoid_check(const Config& cfg, Format fmt, std::ostream& out) {
    std::ifstream in(cfg.file);
    if (!in) throw InvalidInput("cannot open groupoid file '" + cfg.file + "'");
    const GroupoidFile gf = parse_groupoid_text(in);
    const auto structure = gf.presentation->structure_violations();
    const auto report = validate_groupoid_cocycle(gf.cocycle);
    std::optional<std::size_t> sections;
    if (structure.empty() && report.valid) sections = sections_dim_groupoid(gf.cocycle);
    if (fmt == Format::Csv) {
        out << "objects,morphisms,structure_ok,cocycle_ok,violations,sections\n"
            << gf.presentation->objects() << "," << gf.presentation->morphisms() << "," << yes(structure.empty()) << "," << yes(report.valid) << ","
            << structure.size() + report.violations.size() << "," << (sections ? std::to_string(*sections) : "n/a") << "\n";
    } else {
        out << "objects: " << gf.presentation->objects() << "\nmorphisms: " << gf.presentation->morphisms() << "\n";
        out << "structure: " << (structure.empty() ? "ok" : "invalid") << "\n";
        for (const auto& v : structure) out << "  " << v << "\n";
        out << "cocycle: " << (report.valid ? "valid" : "invalid") << "\n";
        for (const auto& v : report.violations) out << "  " << v << "\n";
        if (sections) out << "sections: " << *sections << "\n";
    }
    return structure.empty() && report.valid ? kExitOk : kExitDomain;
}

/// Runs one command line (args excludes the program name).
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Line bundles of finite-group Chern-Simons theory on surfaces via 2-group bundles", "dwline"};
    app.require_subcommand(1);
    Config cfg;

    auto add_format = [&](CLI::App* sub) { sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"plain", "csv"})); };
    auto add_group = [&](CLI::App* sub) { sub->add_option("--group", cfg.group_spec, "cyclic:n | klein4 | s3 | file:<path>")->required(); };
    auto add_alpha = [&](CLI::App* sub) {
        sub->add_option("--level", cfg.level, "Level N of the cyclic 3-cocycle");
        sub->add_option("--cocycle", cfg.cocycle_file, "3-cochain file");
    };

    auto* verify = app.add_subcommand("verify-alpha", "Check that the 3-cocycle is closed and normalized");
    add_group(verify);
    add_alpha(verify);
    add_format(verify);

    auto* enumerate = app.add_subcommand("enumerate", "List flat G-bundles (holonomy tuples)");
    add_group(enumerate);
    enumerate->add_option("--genus", cfg.genus, "Surface genus (1 or 2)");
    add_format(enumerate);

    auto* orbits = app.add_subcommand("orbits", "Conjugation orbits with orbit and stabilizer sizes");
    add_group(orbits);
    orbits->add_option("--genus", cfg.genus, "Surface genus (1 or 2)");
    add_format(orbits);

    auto* character = app.add_subcommand("character", "Mapping-class cocycle r_diff(rep, A)");
    add_group(character);
    add_alpha(character);
    character->add_option("--rep", cfg.rep, "g,h element indices")->required();
    character->add_option("--matrix", cfg.matrix, "a,b,c,d with ad - bc = 1")->required();
    character->add_option("--window", cfg.window, "Lift window override");
    add_format(character);

    auto* klein = app.add_subcommand("klein", "Closed-form character N b / n^2 on Gamma1(n)");
    klein->add_option("--n", cfg.n, "Order n")->required();
    klein->add_option("--level", cfg.level, "Level N")->required();
    klein->add_option("--matrix", cfg.matrix, "a,b,c,d")->required();
    add_format(klein);

    auto* dehn = app.add_subcommand("dehn", "Dehn twist character for rep (g, 1)");
    add_group(dehn);
    add_alpha(dehn);
    dehn->add_option("--elt", cfg.element, "Element index g")->required();
    add_format(dehn);

    auto* dim = app.add_subcommand("dim", "Dimension of the space of sections over genus-1 moduli");
    add_group(dim);
    add_alpha(dim);
    dim->add_option("--window", cfg.window, "Lift window override");
    add_format(dim);

    auto* gcheck = app.add_subcommand("groupoid-check", "Validate a groupoid presentation and cocycle file");
    gcheck->add_option("--file", cfg.file, "Groupoid file")->required();
    add_format(gcheck);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }

    const Format fmt = cfg.format == "csv" ? Format::Csv : Format::Plain;
    try {
        if (verify->parsed()) return cmd_verify_alpha(cfg, fmt, out);
        if (enumerate->parsed()) return cmd_enumerate(cfg, fmt, out);
        if (orbits->parsed()) return cmd_orbits(cfg, fmt, out);
        if (character->parsed()) return cmd_character(cfg, fmt, out);
        if (klein->parsed()) return cmd_klein(cfg, fmt, out);
        if (dehn->parsed()) return cmd_dehn(cfg, fmt, out);
        if (dim->parsed()) return cmd_dim(cfg, fmt, out);
        if (gcheck->parsed()) return cmd_groupoid_check(cfg, fmt, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitDomain;
    }
    err << "usage error: no subcommand\n";
    return kExitUsage;
}

}  // namespace dwline::cli
