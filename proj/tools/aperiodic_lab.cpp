// aperiodic_lab command-line tool.
//
//   generate  write a canonical point-set file
//   analyze   complexity.csv, repetitivity.csv, certificates.json
//   verify    the full checklist; verdicts.json; exit 0 iff all verdicts pass
//   oracle    fast patch counting against the brute-force oracle
//
// Exit codes: 0 success/pass, 1 verdict failure, 2 usage or infrastructure error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "aperiodic_lab.hpp"

namespace fs = std::filesystem;
using namespace aplab;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kError = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flag values as given on the command line; empty when absent.
struct Flags {
    std::string config;
    std::string set, d, spacing, W, c, symbol, motif, cell, out;
    std::string input, grid, grid_step, probes, out_dir, threads, max_period;
    bool allow_shallow = false;
    bool allow_large = false;
    bool inject_fault = false;
};

// Flags override the JSON config file, which overrides defaults.
class Settings {
public:
    explicit Settings(Json cfg) : cfg_(std::move(cfg)) {}

    std::optional<std::string> get(const std::string& flag_value, const std::string& key) const {
        if (!flag_value.empty()) return flag_value;
        if (cfg_.contains(key)) {
            const Json& v = cfg_.at(key);
            if (v.is_string()) return v.get<std::string>();
            if (v.is_number_integer()) return std::to_string(v.get<long long>());
            if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
            if (v.is_array()) {
                std::string s;
                for (const auto& e : v) {
                    if (!s.empty()) s += ",";
                    s += e.is_string() ? e.get<std::string>() : std::to_string(e.get<long long>());
                }
                return s;
            }
            throw UsageError("config key '" + key + "' must be an integer or a string");
        }
        return std::nullopt;
    }

    std::string require(const std::string& flag_value, const std::string& key) const {
        auto v = get(flag_value, key);
        if (!v) throw UsageError("missing required setting --" + key);
        return *v;
    }

    bool flag(bool given, const std::string& key) const {
        if (given) return true;
        return cfg_.contains(key) && cfg_.at(key).is_boolean() && cfg_.at(key).get<bool>();
    }

private:
    Json cfg_;
};

Json load_config(const std::string& path) {
    if (path.empty()) return Json::object();
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file: " + path);
    try {
        Json j = Json::parse(in);
        if (!j.is_object()) throw UsageError("config file must hold a JSON object");
        return j;
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("config file is not valid JSON: ") + e.what());
    }
}

unsigned parse_threads(const Settings& s, const Flags& f) {
    auto v = s.get(f.threads, "threads");
    if (!v) return default_threads();
    const QNum q = parse_number(*v);
    if (!q.is_integer() || qsign(q) <= 0) throw UsageError("--threads must be a positive integer");
    return q.a().convert_to<unsigned>();
}

// "0;1/3" -> two 1D points, "0,0;1/2,1/2" -> two 2D points
std::vector<Point> parse_points(const std::string& text) {
    std::vector<Point> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ';')) {
        Point p;
        std::stringstream cs(item);
        std::string c;
        while (std::getline(cs, c, ',')) p.coords.push_back(parse_number(c));
        if (p.coords.empty()) throw UsageError("empty point in '" + text + "'");
        out.push_back(std::move(p));
    }
    if (out.empty()) throw UsageError("no points in '" + text + "'");
    return out;
}

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

PointSet generate(const Settings& s, const Flags& f) {
    const std::string set = s.require(f.set, "set");
    const QNum W = parse_number(s.require(f.W, "W"));
    if (set == "lattice") {
        const QNum d = parse_number(s.get(f.d, "d").value_or("1"));
        if (d != QNum(1) && d != QNum(2)) throw UsageError("--d must be 1 or 2");
        return gen_lattice(d == QNum(1) ? 1 : 2, parse_number(s.get(f.spacing, "spacing").value_or("1")), W);
    }
    if (set == "fibonacci-int") return gen_fibonacci_integer(W);
    if (set == "fibonacci-cp") return gen_fibonacci_cut_project(parse_number(s.get(f.c, "c").value_or("0")), W);
    if (set == "block2d") {
        const std::string sym = s.get(f.symbol, "symbol").value_or("A");
        if (sym.size() != 1) throw UsageError("--symbol must be a single letter");
        return gen_block_substitution_2d(sym[0], W);
    }
    if (set == "superlattice") {
        const auto motif = parse_points(s.require(f.motif, "motif"));
        const auto cell = parse_points(s.require(f.cell, "cell"));
        if (cell.size() != 1) throw UsageError("--cell must be a single vector");
        return gen_periodic_superlattice(motif, cell[0], W);
    }
    throw UsageError("unknown --set '" + set + "' (lattice, fibonacci-int, fibonacci-cp, block2d, superlattice)");
}

PointSet load_input(const Settings& s, const Flags& f) {
    const std::string path = s.require(f.input, "input");
    if (!fs::exists(path)) throw std::runtime_error("input file not found: " + path);
    return PointSet::load(path);
}

AnalysisConfig analysis_config(const Settings& s, const Flags& f, const PointSet& X) {
    AnalysisConfig c;
    auto g = s.get(f.grid, "grid");
    c.grid = g ? parse_grid(*g) : default_grid(X.window_radius());
    c.allow_shallow = s.flag(f.allow_shallow, "allow_shallow_window");
    if (auto p = s.get(f.probes, "probes")) {
        const QNum q = parse_number(*p);
        if (!q.is_integer() || q < QNum(100)) throw UsageError("--probes must be an integer >= 100");
        c.probes = q.a().convert_to<std::size_t>();
    }
    if (auto h = s.get(f.grid_step, "grid_step")) c.grid_step = parse_number(*h);
    if (auto m = s.get(f.max_period, "max_period_norm")) c.period_max_norm = parse_number(*m);
    c.threads = parse_threads(s, f);
    return c;
}

fs::path out_dir(const Settings& s, const Flags& f) { return fs::path(s.get(f.out_dir, "output_dir").value_or(".")); }

int cmd_generate(const Settings& s, const Flags& f) {
    const PointSet X = generate(s, f);
    const std::string out = s.get(f.out, "out").value_or("pointset.json");
    if (out == "-") {
        std::cout << X.serialize();
    } else {
        write_file(out, X.serialize());
        std::cout << "wrote " << out << "\n";
    }
    std::ostream& log = out == "-" ? std::cerr : std::cout;
    log << "points: " << X.size() << "\n";
    log << "dimension: " << X.dimension() << "\n";
    if (X.size() >= 2) {
        const DeloneParams p = packing_covering(X);
        log << "r_hat: " << display_sqrt(p.r_sq) << "\n";
        log << "R_hat: [" << report::m_lo_display(p.R) << ", " << report::m_hi_display(p.R) << "] over B(0, "
            << display(p.R_eval_radius) << ")\n";
    }
    return kPass;
}

int cmd_analyze(const Settings& s, const Flags& f, bool verify) {
    const PointSet X = load_input(s, f);
    const AnalysisConfig cfg = analysis_config(s, f, X);
    const PatchEngine engine(X);
    const Analysis A = run_analysis(engine, cfg);
    const fs::path dir = out_dir(s, f);
    if (verify) {
        write_file(dir / "verdicts.json", verdicts_json(A).dump(2) + "\n");
        std::cout << render_text(A);
        if (A.period) std::cout << "period witness written to verdicts.json\n";
        return A.passed() ? kPass : kFail;
    }
    write_file(dir / "complexity.csv", complexity_csv(A.complexity));
    write_file(dir / "repetitivity.csv", repetitivity_csv(A.repetitivity));
    write_file(dir / "certificates.json", certificate_json(A).dump(2) + "\n");
    std::cout << render_text(A);
    const std::size_t warn = A.invalid_rows();
    if (warn > 0) std::cout << "warning: " << warn << " repetitivity row(s) flagged 'window too small'\n";
    std::cout << "wrote " << (dir / "complexity.csv").string() << ", " << (dir / "repetitivity.csv").string() << ", "
              << (dir / "certificates.json").string() << "\n";
    return kPass;
}

int cmd_oracle(const Settings& s, const Flags& f) {
    const PointSet X = load_input(s, f);
    const QNum limit = X.dimension() == 1 ? QNum(200) : QNum(64);
    if (X.window_radius() > limit && !s.flag(f.allow_large, "allow_large")) {
        throw UsageError("oracle window limit exceeded (d=1: W <= 200, d=2: W <= 64); pass --allow-large");
    }
    auto g = s.get(f.grid, "grid");
    const std::vector<QNum> grid = g ? parse_grid(*g) : default_grid(X.window_radius());
    require_increasing_grid(grid);
    CountOptions co;
    co.threads = parse_threads(s, f);
    const PatchEngine engine(X);
    const bool fault = s.flag(f.inject_fault, "inject_fault");
    for (const auto& T : grid) {
        PatchCount fast = engine.count(T, co);
        if (fault) {
            // test hook: move one center into another group
            auto& gs = fast.occurrences.groups;
            if (gs.size() >= 2) {
                gs[1].centers.push_back(gs[0].centers.back());
                gs[0].centers.pop_back();
                if (gs[0].centers.empty()) gs.erase(gs.begin());
            } else if (!gs.empty() && gs[0].centers.size() >= 2) {
                gs.push_back(PatchGroup{{gs[0].centers.back()}, 0});
                gs[0].centers.pop_back();
            }
            fast.count = gs.size();
        }
        const PatchCount slow = count_patches_bruteforce(X, T);
        if (fast.count != slow.count || !same_grouping(fast.occurrences, slow.occurrences)) {
            std::size_t k = 0;
            const auto& a = fast.occurrences.groups;
            const auto& b = slow.occurrences.groups;
            while (k < a.size() && k < b.size() && a[k].centers == b[k].centers) ++k;
            std::cout << "MISMATCH at T=" << display(T) << ": fast count " << fast.count << ", oracle count "
                      << slow.count << "\n";
            if (k < a.size()) {
                std::ostringstream key;
                key << std::hex << a[k].key_hash;
                std::cout << "first differing patch class: #" << k << " key 0x" << key.str() << " first center (";
                const Point& p = X[a[k].centers.front()];
                for (std::size_t i = 0; i < p.dimension(); ++i) std::cout << (i ? ", " : "") << display(p[i]);
                std::cout << ")\n";
            }
            return kFail;
        }
        std::cout << "T=" << display(T) << " count=" << fast.count << " ok\n";
    }
    std::cout << "oracle: identical groupings on " << grid.size() << " grid values\n";
    return kPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact patch counting, repetitivity and certificate checks for Delone set samples"};
    app.require_subcommand(1);
    Flags f;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", f.config, "JSON config file (flags override it)");
        sub->add_option("--threads", f.threads, "worker threads (default: $APERIODIC_LAB_THREADS or 1)");
    };
    auto add_analysis = [&](CLI::App* sub) {
        add_common(sub);
        sub->add_option("input", f.input, "point-set JSON file");
        sub->add_option("--grid", f.grid, "T grid: 'lo:hi:step' or 'T1,T2,...' (default 2..W/4)");
        sub->add_option("--grid-step", f.grid_step, "d=2 covering grid step h (default: automatic)");
        sub->add_option("--probes", f.probes, "probe count for lambda1 (>= 100, default 100)");
        sub->add_option("--max-period-norm", f.max_period, "largest period searched (default W/4)");
        sub->add_option("--out-dir", f.out_dir, "output directory (default .)");
        sub->add_flag("--allow-shallow-window", f.allow_shallow, "permit grid values above W/2");
    };

    CLI::App* gen = app.add_subcommand("generate", "write a canonical point-set file");
    add_common(gen);
    gen->add_option("--set", f.set, "lattice | fibonacci-int | fibonacci-cp | block2d | superlattice");
    gen->add_option("--d", f.d, "dimension for lattice (1 or 2)");
    gen->add_option("--spacing", f.spacing, "lattice spacing (rational)");
    gen->add_option("--W", f.W, "window radius");
    gen->add_option("--c", f.c, "cut-and-project window offset (rational)");
    gen->add_option("--symbol", f.symbol, "block2d letter (A-D)");
    gen->add_option("--motif", f.motif, "superlattice motif, e.g. '0;1/3' or '0,0;1/2,1/2'");
    gen->add_option("--cell", f.cell, "superlattice cell vector, e.g. '1' or '1,1'");
    gen->add_option("--out", f.out, "output file, '-' for stdout (default pointset.json)");

    CLI::App* ana = app.add_subcommand("analyze", "profiles and certificate report");
    add_analysis(ana);
    CLI::App* ver = app.add_subcommand("verify", "run the checklist; exit 0 iff every verdict passes");
    add_analysis(ver);
    CLI::App* ora = app.add_subcommand("oracle", "compare fast patch counting against the brute-force oracle");
    add_common(ora);
    ora->add_option("input", f.input, "point-set JSON file");
    ora->add_option("--grid", f.grid, "T grid (default 2..W/4)");
    ora->add_flag("--allow-large", f.allow_large, "lift the oracle window limits");
    ora->add_flag("--inject-fault", f.inject_fault, "test hook: corrupt the fast occurrence map")->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kError;
    }

    try {
        const Settings s(load_config(f.config));
        if (gen->parsed()) return cmd_generate(s, f);
        if (ana->parsed()) return cmd_analyze(s, f, false);
        if (ver->parsed()) return cmd_analyze(s, f, true);
        if (ora->parsed()) return cmd_oracle(s, f);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kError;
    }
    return kError;
}
