#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "gp/correlations.hpp"
#include "gp/errors.hpp"
#include "gp/gibbs.hpp"
#include "gp/identities.hpp"
#include "gp/paths.hpp"
#include "gp/presets.hpp"
#include "gp/sampler.hpp"

using namespace gp;
using nlohmann::json;

namespace {

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::string g15(double v) { return fmt("%.15g", v); }

// Writes to path, or stdout when path is empty or "-".
void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path);
    out << text;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Window window_from(const std::string& cols, const std::string& rows) {
    auto [c0, c1] = parse_range(cols);
    auto [r0, r1] = parse_range(rows);
    return {static_cast<int>(c0), static_cast<int>(c1), r0, r1};
}

std::string sample_line(const SampleResult& s) {
    const Window& w = s.config.window();
    std::ostringstream os;
    os << "{\"cols\":[" << w.col_lo << "," << w.col_hi << "],\"rows\":[" << w.row_lo << "," << w.row_hi
       << "],\"bits\":\"" << s.config.bits() << "\",\"logp\":" << fmt("%.17g", s.log_probability) << "}\n";
    return os.str();
}

Configuration parse_sample_line(const std::string& line) {
    try {
        json j = json::parse(line);
        Window w{j.at("cols").at(0).get<int>(), j.at("cols").at(1).get<int>(), j.at("rows").at(0).get<long>(),
                 j.at("rows").at(1).get<long>()};
        return Configuration::from_bits(w, j.at("bits").get<std::string>());
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("bad sample line: ") + e.what());
    }
}

std::string site_list(const std::vector<Site>& sites) {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < sites.size(); ++i) {
        os << (i ? "," : "") << "[" << sites[i].col << "," << sites[i].row << "]";
    }
    os << "]";
    return os.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Determinantal lattice fields: kernels, probabilities, sampling and path ensembles"};
    app.require_subcommand(1);

    std::string model_path, out_path;
    EvaluationMode mode = EvaluationMode::Canonical;
    std::string mode_name = "canonical";
    auto add_model = [&](CLI::App* cmd) {
        cmd->add_option("--model", model_path, "Model JSON file")->required();
        cmd->add_option("--eval-mode", mode_name, "canonical or direct")
            ->check(CLI::IsMember({"canonical", "direct"}));
    };
    auto context = [&]() {
        mode = mode_name == "direct" ? EvaluationMode::Direct : EvaluationMode::Canonical;
        return KernelContext(load_model(model_path), mode);
    };

    // kernel
    auto* kernel = app.add_subcommand("kernel", "Evaluate K(sigma,x;tau,y)");
    add_model(kernel);
    int sigma = 0, tau = 0;
    long x = 0, y = 0;
    bool closed_form = false;
    kernel->add_option("--sigma", sigma)->required();
    kernel->add_option("--x", x)->required();
    kernel->add_option("--tau", tau)->required();
    kernel->add_option("--y", y)->required();
    kernel->add_flag("--closed-form", closed_form, "Also print the equal-column sine kernel");
    kernel->callback([&] {
        KernelContext ctx = context();
        cplx v = ctx.eval(sigma, x, tau, y);
        std::cout << g15(v.real()) << " " << g15(v.imag()) << "\n";
        if (closed_form) {
            if (sigma != tau) throw Error(ErrorCode::InvalidEvent, "--closed-form needs sigma == tau");
            cplx c = equal_time_closed_form(ctx.model().z, x - y);
            std::cout << g15(c.real()) << " " << g15(c.imag()) << "\n";
        }
    });

    // prob
    auto* prob = app.add_subcommand("prob", "Probability of a particle/hole event");
    add_model(prob);
    std::string particles, holes;
    prob->add_option("--particles", particles, "Sites like \"(0,0),(0,1)\"");
    prob->add_option("--holes", holes);
    prob->callback([&] {
        KernelContext ctx = context();
        EventSpec ev{parse_sites(particles), parse_sites(holes)};
        std::cout << g15(event_probability(ctx, ev)) << "\n";
    });

    // window-dist
    auto* wd = app.add_subcommand("window-dist", "Exact distribution of a small window");
    add_model(wd);
    std::string cols, rows, format = "csv";
    wd->add_option("--cols", cols, "A:B")->required();
    wd->add_option("--rows", rows, "C:D")->required();
    wd->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
    wd->add_option("--out", out_path);
    wd->callback([&] {
        KernelContext ctx = context();
        Window w = window_from(cols, rows);
        WindowDistribution d = window_distribution(ctx, w);
        std::ostringstream os;
        if (format == "csv") {
            os << "bits,probability\n";
            for (std::size_t m = 0; m < d.probabilities.size(); ++m) {
                os << Configuration::from_mask(w, m).bits() << "," << g15(d.probabilities[m]) << "\n";
            }
        } else {
            json doc;
            doc["cols"] = {w.col_lo, w.col_hi};
            doc["rows"] = {w.row_lo, w.row_hi};
            doc["total"] = d.total;
            doc["min"] = d.min;
            json entries = json::array();
            for (std::size_t m = 0; m < d.probabilities.size(); ++m) {
                entries.push_back({{"bits", Configuration::from_mask(w, m).bits()}, {"p", d.probabilities[m]}});
            }
            doc["entries"] = entries;
            os << doc.dump(2) << "\n";
        }
        emit(out_path, os.str());
        std::cerr << "total " << g15(d.total) << "\n";
    });

    // verify
    auto* verify = app.add_subcommand("verify", "Run the kernel identity checks");
    add_model(verify);
    std::string suite = "all", report_path;
    int sweeps = 10;
    std::uint64_t seed = 1;
    verify->add_option("--suite", suite)->check(CLI::IsMember({"all", "linear", "interlacing", "moves", "environment"}));
    verify->add_option("--sweeps", sweeps);
    verify->add_option("--seed", seed);
    verify->add_option("--report", report_path);
    int exit_code = 0;
    verify->callback([&] {
        KernelContext ctx = context();
        auto reports = run_identity_suite(ctx, parse_identity_suite(suite), sweeps, seed);
        std::size_t failed = 0;
        double worst = 0.0;
        json doc = json::array();
        for (const auto& r : reports) {
            failed += !r.pass;
            worst = std::max(worst, r.residual);
            doc.push_back({{"identity", r.identity},
                           {"parameters", r.parameters},
                           {"residual", r.residual},
                           {"tolerance", r.tolerance},
                           {"pass", r.pass}});
            if (!r.pass) std::cout << "FAIL " << r.identity << " " << r.parameters << " residual " << g15(r.residual) << "\n";
        }
        std::cout << reports.size() << " checks, " << failed << " failed, max residual " << g15(worst) << "\n";
        if (!report_path.empty()) emit(report_path, doc.dump(2) + "\n");
        if (failed) exit_code = 1;
    });

    // sample
    auto* sample = app.add_subcommand("sample", "Exact samples of a window");
    add_model(sample);
    std::size_t count = 1;
    unsigned threads = 0;
    sample->add_option("--cols", cols, "A:B")->required();
    sample->add_option("--rows", rows, "C:D")->required();
    sample->add_option("--seed", seed);
    sample->add_option("-n,--count", count);
    sample->add_option("--threads", threads, "0 picks the hardware concurrency");
    sample->add_option("--out", out_path);
    sample->callback([&] {
        KernelContext ctx = context();
        auto samples = sample_many(ctx, window_from(cols, rows), seed, count, threads);
        std::string text;
        for (const auto& s : samples) text += sample_line(s);
        emit(out_path, text);
    });

    // paths
    auto* paths = app.add_subcommand("paths", "Path ensembles of sampled configurations");
    add_model(paths);
    std::string in_path, svg_dir, render = "paths";
    paths->add_option("--in", in_path, "Samples in ndjson")->required();
    paths->add_option("--out", out_path);
    paths->add_option("--svg", svg_dir, "Directory for one SVG per sample");
    paths->add_option("--mode", render)->check(CLI::IsMember({"paths", "lozenge"}));
    paths->callback([&] {
        Model model = load_model(model_path);
        RenderMode rmode = parse_render_mode(render);
        if (!svg_dir.empty()) std::filesystem::create_directories(svg_dir);
        std::istringstream in(read_file(in_path));
        std::string line, text;
        std::size_t index = 0;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            Configuration config = parse_sample_line(line);
            std::vector<std::string> violations;
            PathEnsembleWindow ens = extract_paths(config, model, violations);
            std::ostringstream os;
            os << "{\"index\":" << index << ",\"action\":" << fmt("%.17g", total_action(ens))
               << ",\"violations\":" << violations.size()
               << ",\"intersections\":" << find_intersections(ens).size() << ",\"chains\":[";
            for (std::size_t c = 0; c < ens.chains.size(); ++c) {
                os << (c ? "," : "") << "{\"sites\":" << site_list(ens.chains[c])
                   << ",\"truncated\":" << (ens.chain_truncated[c] ? "true" : "false") << "}";
            }
            os << "]}\n";
            text += os.str();
            if (!svg_dir.empty()) {
                char name[32];
                std::snprintf(name, sizeof name, "sample_%05zu.svg", index);
                std::ofstream svg(std::filesystem::path(svg_dir) / name, std::ios::binary);
                svg << render_svg(ens, config, rmode);
            }
            ++index;
        }
        emit(out_path, text);
    });

    // gibbs-check
    auto* gibbs = app.add_subcommand("gibbs-check", "Compare path and determinantal conditionals in a box");
    add_model(gibbs);
    std::string box_path;
    double tv_tolerance = 1e-6;
    gibbs->add_option("--box", box_path, "Box JSON")->required();
    gibbs->add_option("--report", report_path);
    gibbs->add_option("--tolerance", tv_tolerance);
    gibbs->callback([&] {
        KernelContext ctx = context();
        BoxSpec box = parse_box_spec(read_file(box_path));
        GibbsReport r = gibbs_check(ctx, box);
        std::cout << r.tuples << " tuples, total variation " << g15(r.total_variation) << ", leaked "
                  << g15(r.leaked) << ", connected " << (r.connected ? "yes" : "no") << "\n";
        if (!report_path.empty()) emit(report_path, gibbs_report_to_json(box, r));
        if (r.total_variation > tv_tolerance) exit_code = 1;
    });

    // preset
    auto* preset = app.add_subcommand("preset", "Write a preset model");
    std::string name = "beta", k_range = "-3:3";
    PresetSpec spec;
    preset->add_option("--name", name)->check(CLI::IsMember({"beta", "alphabeta"}));
    preset->add_option("--kappa", spec.kappa);
    preset->add_option("--lambda", spec.lambda);
    preset->add_option("--temp-tau", spec.temp_tau);
    preset->add_option("--z-modulus", spec.z.modulus);
    preset->add_option("--z-argument", spec.z.argument);
    preset->add_option("--k-range", k_range, "A:B");
    preset->add_option("--out", out_path);
    preset->callback([&] {
        spec.name = parse_preset_name(name);
        auto [lo, hi] = parse_range(k_range);
        emit(out_path, model_to_json(instantiate_preset(spec, static_cast<int>(lo), static_cast<int>(hi))));
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return exit_code;
}
