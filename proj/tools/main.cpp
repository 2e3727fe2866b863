#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "frechet/dist.hpp"
#include "frechet/estimate.hpp"
#include "frechet/gammatest.hpp"
#include "frechet/sampler.hpp"
#include "frechet/spectral.hpp"
#include "frechet/version.hpp"

namespace {

using nlohmann::json;

std::string fmt(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void fail(int code, const std::string& type, const std::string& message) {
    json err{{"error", message}, {"type", type}};
    std::cerr << err.dump() << "\n";
    std::exit(code);
}

// "a:b:step" (inclusive linear grid) or "a:b:log" (50 log-spaced points).
std::vector<double> parse_grid(const std::string& text) {
    auto p1 = text.find(':');
    auto p2 = text.find(':', p1 == std::string::npos ? p1 : p1 + 1);
    if (p1 == std::string::npos || p2 == std::string::npos)
        throw std::invalid_argument("grid must be a:b:step or a:b:log");
    double a = std::stod(text.substr(0, p1));
    double b = std::stod(text.substr(p1 + 1, p2 - p1 - 1));
    std::string tail = text.substr(p2 + 1);
    if (!(a > 0 ? b >= a : b >= a)) throw std::invalid_argument("grid needs b >= a");
    std::vector<double> out;
    if (tail == "log") {
        if (!(a > 0)) throw std::invalid_argument("log grid needs a > 0");
        const int count = 50;
        for (int i = 0; i < count; ++i)
            out.push_back(a * std::pow(b / a, double(i) / (count - 1)));
        out.back() = b;
        return out;
    }
    double step = std::stod(tail);
    if (!(step > 0)) throw std::invalid_argument("grid step must be > 0");
    auto count = std::size_t(std::floor((b - a) / step + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i) {
        double t = a + double(i) * step;
        if (std::abs(t - b) <= 1e-9 * (std::abs(b) + 1.0)) t = b;
        out.push_back(std::min(t, b));
    }
    return out;
}

struct Table {
    std::vector<std::vector<double>> rows;  // parsed numeric columns
};

// Accepts '#'-comment lines, an optional non-numeric header row, and 1-3
// numeric columns per row.
Table read_csv(std::istream& in) {
    Table t;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        bool numeric = true;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t pos = 0;
                double v = std::stod(cell, &pos);
                while (pos < cell.size() && std::isspace((unsigned char)cell[pos])) ++pos;
                if (pos != cell.size()) {
                    numeric = false;
                    break;
                }
                row.push_back(v);
            } catch (const std::exception&) {
                numeric = false;
                break;
            }
        }
        if (!numeric) {
            if (t.rows.empty()) continue;  // header row
            throw std::invalid_argument("non-numeric cell in CSV body: " + line);
        }
        if (!row.empty()) t.rows.push_back(std::move(row));
    }
    return t;
}

Table read_input(const std::string& path) {
    if (path == "-") return read_csv(std::cin);
    std::ifstream in(path);
    if (!in) fail(4, "io", "cannot open input: " + path);
    return read_csv(in);
}

// Pairs from 2-column (x,y) or 3-column (i,x,y) data.
void extract_pairs(const Table& t, std::vector<double>& xs, std::vector<double>& ys) {
    for (const auto& row : t.rows) {
        if (row.size() == 2) {
            xs.push_back(row[0]);
            ys.push_back(row[1]);
        } else if (row.size() == 3) {
            xs.push_back(row[1]);
            ys.push_back(row[2]);
        } else {
            throw std::invalid_argument("need 2 or 3 columns per row for paired data");
        }
    }
    if (xs.empty()) throw std::invalid_argument("no data rows in input");
}

class Output {
  public:
    explicit Output(const std::string& path) : path_(path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) fail(4, "io", "cannot open output: " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
    void finish() {
        stream().flush();
        if (file_.is_open() && !file_) fail(4, "io", "write failed: " + path_);
        if (!file_.is_open() && !std::cout) fail(4, "io", "write to stdout failed");
    }

  private:
    std::string path_;
    std::ofstream file_;
};

int env_threads() {
    const char* v = std::getenv("FRECHET_THREADS");
    if (!v) return 1;
    int t = std::atoi(v);
    return t >= 1 ? t : 1;
}

json model_json_or_fail(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        fail(2, "model", std::string("bad model JSON: ") + e.what());
    }
    return {};
}

frechet::SpectralModel load_model(const std::string& text) {
    json j = model_json_or_fail(text);
    try {
        return frechet::model_from_json(j);
    } catch (const std::exception& e) {
        fail(2, "model", e.what());
    }
    throw std::logic_error("unreachable");
}

json config_header(const char* command, const json& extra) {
    json h = extra;
    h["command"] = command;
    h["version"] = frechet::version;
    return h;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bivariate 1-Frechet spectral models: exact laws, sampling, tail tests"};
    app.require_subcommand(1);
    int threads = env_threads();
    app.add_option("--threads", threads, "worker threads (results never depend on this)");

    std::string model_text, out_path, input_path, grid_text, side_text = "plus",
                variant_text = "modified";
    std::uint64_t seed = 1;
    std::size_t n = 0, reps = 0, cells = 0, k = 0;
    double u = 0, level = 0.05, x_arg = 0, y_arg = 0, t_arg = 0;
    double norming_n = 0, u_n = 0;
    int grid_n = 1000;

    auto* c_sample = app.add_subcommand("sample", "draw i.i.d. pairs as CSV (i,x,y)");
    c_sample->fallthrough();
    c_sample->add_option("--model", model_text, "model JSON")->required();
    c_sample->add_option("--n", n, "number of pairs")->required();
    c_sample->add_option("--seed", seed, "RNG seed");
    c_sample->add_option("--out", out_path, "output path (default stdout)");

    auto* c_cdf = app.add_subcommand("cdf", "evaluate joint/conditional/ratio laws as JSON");
    c_cdf->fallthrough();
    c_cdf->add_option("--model", model_text, "model JSON")->required();
    auto* ox = c_cdf->add_option("--x", x_arg, "joint/conditional x");
    auto* oy = c_cdf->add_option("--y", y_arg, "joint/conditional y");
    auto* ot = c_cdf->add_option("--t", t_arg, "ratio threshold t");
    c_cdf->add_option("--u", u, "lower threshold u");
    c_cdf->add_option("--out", out_path, "output path (default stdout)");

    auto* c_gamma = app.add_subcommand("gamma-fn", "tabulate ratio tail scales as CSV");
    c_gamma->fallthrough();
    c_gamma->add_option("--model", model_text, "model JSON")->required();
    c_gamma->add_option("--t-grid", grid_text, "t grid a:b:step or a:b:log")->required();
    std::string method_text = "fast";
    c_gamma->add_option("--method", method_text, "fast|quadrature");
    c_gamma->add_option("--out", out_path, "output path (default stdout)");

    auto* c_hill = app.add_subcommand("hill", "Hill estimator from CSV data as JSON");
    c_hill->fallthrough();
    c_hill->add_option("--input", input_path, "CSV path or - for stdin")->required();
    c_hill->add_option("--k", k, "order statistics used (default floor(n^0.3))");
    c_hill->add_option("--out", out_path, "output path (default stdout)");

    auto* c_test = app.add_subcommand("gamma-test", "quotient-correlation independence test");
    c_test->fallthrough();
    c_test->add_option("--input", input_path, "paired CSV path or - for stdin");
    c_test->add_option("--model", model_text, "model JSON to self-generate from");
    c_test->add_option("--n", n, "pairs to generate with --model");
    c_test->add_option("--seed", seed, "RNG seed for --model generation");
    c_test->add_option("--level", level, "test level");
    c_test->add_option("--u", u, "lower threshold u");
    c_test->add_option("--variant", variant_text, "original|modified");
    c_test->add_option("--out", out_path, "output path (default stdout)");

    auto* c_power = app.add_subcommand("power-curve", "Monte Carlo power across a rho grid");
    c_power->fallthrough();
    c_power->add_option("--rho-grid", grid_text, "rho grid a:b:step")->required();
    c_power->add_option("--n", n, "pairs per replication")->required();
    c_power->add_option("--reps", reps, "replications per grid point")->required();
    c_power->add_option("--level", level, "test level");
    c_power->add_option("--seed", seed, "RNG seed");
    c_power->add_option("--out", out_path, "output path (default stdout)");

    auto* c_check = app.add_subcommand("check", "validate a model and report its invariants");
    c_check->fallthrough();
    c_check->add_option("--model", model_text, "model JSON")->required();
    c_check->add_option("--grid-n", grid_n, "ratio-monotonicity grid points");
    c_check->add_option("--norming-n", norming_n, "report norming constant for this n");
    c_check->add_option("--u", u, "threshold for the norming target");
    c_check->add_option("--u-n", u_n, "diverging-threshold override u_n");
    c_check->add_option("--side", side_text, "plus|minus");
    c_check->add_option("--quantized-cells", cells, "also report quantized cell count");
    c_check->add_option("--out", out_path, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        fail(2, "args", e.what());
    }

    try {
        if (*c_sample) {
            auto model = load_model(model_text);
            auto batch = frechet::sample_batch(model, n, seed, threads);
            Output out(out_path);
            json hdr = config_header(
                "sample", {{"model", json::parse(batch.model_id)}, {"n", n}, {"seed", seed}});
            out.stream() << "# " << hdr.dump() << "\n" << "i,x,y\n";
            for (std::size_t i = 0; i < n; ++i)
                out.stream() << i << ',' << fmt(batch.x[i]) << ',' << fmt(batch.y[i]) << "\n";
            out.finish();
        } else if (*c_cdf) {
            auto model = load_model(model_text);
            bool have_xy = ox->count() > 0 && oy->count() > 0;
            bool have_t = ot->count() > 0;
            if (!have_xy && !have_t)
                throw std::invalid_argument("cdf needs --x/--y, --t, or both");
            json result = config_header("cdf", {{"model", json::parse(model.id())}, {"u", u}});
            if (have_xy) {
                result["x"] = x_arg;
                result["y"] = y_arg;
                result["joint_cdf"] = frechet::joint_cdf(model, x_arg, y_arg);
                result["conditional_cdf"] = frechet::conditional_cdf(model, x_arg, y_arg);
            }
            if (have_t) {
                result["t"] = t_arg;
                result["ratio_joint"] = frechet::ratio_joint(model, t_arg, u);
                if (t_arg >= 1) result["ratio_tail"] = frechet::ratio_tail(model, t_arg, u);
            }
            Output out(out_path);
            out.stream() << result.dump() << "\n";
            out.finish();
        } else if (*c_gamma) {
            auto model = load_model(model_text);
            auto grid = parse_grid(grid_text);
            frechet::Method method;
            if (method_text == "fast")
                method = frechet::Method::fast;
            else if (method_text == "quadrature")
                method = frechet::Method::quadrature;
            else
                throw std::invalid_argument("--method must be fast or quadrature");
            Output out(out_path);
            json hdr = config_header("gamma-fn", {{"model", json::parse(model.id())},
                                                  {"t_grid", grid_text},
                                                  {"method", method_text}});
            out.stream() << "# " << hdr.dump() << "\n"
                         << "t,gamma_plus,gamma_minus,norm_f_Et,norm_g_Dt\n";
            for (double t : grid) {
                double gp = frechet::gamma_fn(model, frechet::Side::plus, t, method);
                double gm = frechet::gamma_fn(model, frechet::Side::minus, t, method);
                double nf = frechet::norm_f_et(model, t, method);
                double gd = frechet::norm_g_dt(model, t, method);
                out.stream() << fmt(t) << ',' << fmt(gp) << ',' << fmt(gm) << ',' << fmt(nf)
                             << ',' << fmt(gd) << "\n";
            }
            out.finish();
        } else if (*c_hill) {
            Table tab = read_input(input_path);
            std::vector<double> data;
            for (const auto& row : tab.rows) {
                if (row.size() == 1)
                    data.push_back(row[0]);
                else if (row.size() == 2)
                    data.push_back(row[0] / row[1]);
                else if (row.size() == 3)
                    data.push_back(row[1] / row[2]);
                else
                    throw std::invalid_argument("need 1-3 columns per row");
            }
            if (data.size() < 2) throw std::invalid_argument("need at least 2 observations");
            std::size_t kk = k > 0 ? k : std::size_t(std::floor(std::pow(double(data.size()), 0.3)));
            auto est = frechet::hill(data, kk);
            json result = config_header("hill", {{"gamma_hat", est.gamma_hat},
                                                 {"k", est.k},
                                                 {"n", est.n},
                                                 {"se_approx", est.se_approx}});
            Output out(out_path);
            out.stream() << result.dump() << "\n";
            out.finish();
        } else if (*c_test) {
            std::vector<double> xs, ys;
            if (!input_path.empty()) {
                Table tab = read_input(input_path);
                extract_pairs(tab, xs, ys);
            } else if (!model_text.empty()) {
                if (n == 0) throw std::invalid_argument("--model generation needs --n");
                auto model = load_model(model_text);
                auto batch = frechet::sample_batch(model, n, seed, threads);
                xs = std::move(batch.x);
                ys = std::move(batch.y);
            } else {
                throw std::invalid_argument("gamma-test needs --input or --model");
            }
            frechet::Variant variant;
            if (variant_text == "original")
                variant = frechet::Variant::original;
            else if (variant_text == "modified")
                variant = frechet::Variant::modified;
            else
                throw std::invalid_argument("--variant must be original or modified");
            auto rep = frechet::gamma_test(xs, ys, level, u, variant);
            json result = config_header("gamma-test",
                                        {{"statistic", rep.statistic},
                                         {"variant", variant_text},
                                         {"u", rep.u},
                                         {"null_theta", rep.null_theta},
                                         {"p_value", rep.p_value},
                                         {"reject", rep.reject},
                                         {"level", rep.level},
                                         {"n", rep.n}});
            Output out(out_path);
            out.stream() << result.dump() << "\n";
            out.finish();
        } else if (*c_power) {
            auto grid = parse_grid(grid_text);
            auto curve = frechet::power_simulation(grid, n, reps, level, seed, threads);
            Output out(out_path);
            json hdr = config_header("power-curve", {{"rho_grid", grid_text},
                                                     {"n", n},
                                                     {"reps", reps},
                                                     {"level", level},
                                                     {"seed", seed}});
            out.stream() << "# " << hdr.dump() << "\n" << "rho,empirical_power,limit_power,reps\n";
            for (const auto& p : curve.points)
                out.stream() << fmt(p.rho) << ',' << fmt(p.empirical_power) << ','
                             << fmt(p.limit) << ',' << reps << "\n";
            out.finish();
        } else if (*c_check) {
            auto model = load_model(model_text);
            auto report = frechet::check_model(model, grid_n);
            json result = config_header("check", {{"model", json::parse(model.id())},
                                                  {"int_f", report.int_f},
                                                  {"int_g", report.int_g},
                                                  {"ratio_nondecreasing", report.ratio_nondecreasing},
                                                  {"standardized", report.standardized},
                                                  {"tail_dependence", frechet::tail_dependence(model)}});
            frechet::Side side;
            if (side_text == "plus")
                side = frechet::Side::plus;
            else if (side_text == "minus")
                side = frechet::Side::minus;
            else
                throw std::invalid_argument("--side must be plus or minus");
            auto ap = frechet::ratio_tail_index(model, frechet::Side::plus);
            auto am = frechet::ratio_tail_index(model, frechet::Side::minus);
            result["ratio_tail_index"] = {{"plus", ap ? json(*ap) : json(nullptr)},
                                          {"minus", am ? json(*am) : json(nullptr)}};
            if (norming_n > 0)
                result["norming"] = frechet::norming(model, side, norming_n, u, u_n);
            if (cells > 0)
                result["quantized_atoms"] = frechet::QuantizedSampler(model, cells).size();
            Output out(out_path);
            out.stream() << result.dump() << "\n";
            out.finish();
        }
    } catch (const json::exception& e) {
        fail(2, "model", e.what());
    } catch (const std::invalid_argument& e) {
        fail(2, "args", e.what());
    } catch (const frechet::QuadratureError& e) {
        fail(3, "numeric", e.what());
    } catch (const frechet::DegenerateStatistic& e) {
        fail(3, "numeric", e.what());
    } catch (const std::domain_error& e) {
        fail(3, "numeric", e.what());
    } catch (const std::ios_base::failure& e) {
        fail(4, "io", e.what());
    } catch (const std::exception& e) {
        fail(3, "numeric", e.what());
    }
    return 0;
}
