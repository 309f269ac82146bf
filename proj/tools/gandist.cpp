// gandist: FID and SID between a reference and a generated feature
// distribution, plus the toy embedder, report rendering and self-tests.
//
// Exit codes: 0 success, 2 input/usage error, 3 numerical error.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "gandist/core.hpp"
#include "gandist/embed.hpp"
#include "gandist/error.hpp"
#include "gandist/fid.hpp"
#include "gandist/io.hpp"
#include "gandist/report.hpp"
#include "gandist/selftest.hpp"
#include "gandist/sid.hpp"

namespace {

void print_value(double value) { std::printf("%.4f\n", value); }

int run_fid(const std::string& ref_path, const std::string& gen_path, const gandist::FidConfig& cfg,
            bool json) {
    const gandist::FeatureSet ref =
        gandist::load_features_auto(ref_path, gandist::Role::Reference);
    const gandist::FeatureSet gen =
        gandist::load_features_auto(gen_path, gandist::Role::Generated);
    std::vector<std::string> warnings;
    const gandist::MetricScore score = gandist::fid_from_features(ref, gen, cfg, &warnings);
    for (const auto& warning : warnings) std::cerr << "warning: " << warning << "\n";
    if (json) {
        nlohmann::ordered_json doc;
        doc["metric"] = "fid";
        doc["value"] = score.value;
        doc["config_digest"] = score.config_digest;
        doc["n_ref"] = score.n_ref;
        doc["n_gen"] = score.n_gen;
        doc["rank_deficient"] = score.rank_deficient;
        doc["config"] = {{"eps", cfg.eps}, {"ddof", cfg.ddof}};
        std::cout << doc.dump(2) << "\n";
    } else {
        print_value(score.value);
    }
    return 0;
}

int run_sid(const std::string& ref_path, const std::string& gen_path, const gandist::SidConfig& cfg,
            int threads, bool json) {
    const gandist::FeatureSet ref =
        gandist::load_features_auto(ref_path, gandist::Role::Reference);
    const gandist::FeatureSet gen =
        gandist::load_features_auto(gen_path, gandist::Role::Generated);
    const gandist::SidDiagnostics diag = gandist::sid_diagnostics(ref, gen, cfg, threads);
    if (json) {
        nlohmann::ordered_json doc;
        doc["metric"] = "sid";
        doc["value"] = diag.score.value;
        doc["config_digest"] = diag.score.config_digest;
        doc["n_ref"] = diag.score.n_ref;
        doc["n_gen"] = diag.score.n_gen;
        doc["config"] = {{"order_m", cfg.order_m},
                         {"side_r", cfg.side_r},
                         {"batches_n", cfg.batches_n},
                         {"test_points_mx", cfg.test_points_mx},
                         {"seed", cfg.seed},
                         {"kernel_eps", cfg.kernel_eps},
                         {"standardize", cfg.standardize}};
        doc["batch_values"] = diag.batch_values;
        doc["standard_error"] = diag.standard_error;
        std::cout << doc.dump(2) << "\n";
    } else {
        print_value(diag.score.value);
    }
    return 0;
}

int run_embed(const std::string& input_dir, const std::string& output_path,
              const std::string& role_name) {
    const gandist::Role role =
        role_name == "gen" ? gandist::Role::Generated : gandist::Role::Reference;
    const gandist::FeatureSet features = gandist::embed_directory(input_dir, role);
    gandist::write_features(features, output_path, gandist::FeatureDtype::F64);
    std::printf("wrote %lld x %lld features to %s\n",
                static_cast<long long>(features.rows()), static_cast<long long>(features.dims()),
                output_path.c_str());
    return 0;
}

int run_report(const std::string& manifest_path, const std::string& format, int threads) {
    const gandist::RunManifest manifest = gandist::load_manifest(manifest_path);
    const std::vector<gandist::ReportRow> rows = gandist::build_report(manifest, threads);
    if (format == "structured") {
        std::cout << gandist::render_report_json(rows).dump(2) << "\n";
    } else {
        std::cout << gandist::render_report_text(rows);
    }
    return 0;
}

int run_selftest(bool quick) {
    bool all_ok = true;
    for (const auto& result : gandist::run_selftest(quick)) {
        std::printf("%s %s: %s\n", result.ok ? "ok  " : "FAIL", result.name.c_str(),
                    result.detail.c_str());
        all_ok = all_ok && result.ok;
    }
    return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"FID and SID metrics between reference and generated feature distributions"};
    app.require_subcommand(1);

    std::string ref_path;
    std::string gen_path;
    bool json = false;
    int threads = 0;

    gandist::FidConfig fid_cfg;
    auto* fid_cmd = app.add_subcommand("fid", "Frechet distance between Gaussian summaries");
    fid_cmd->add_option("--ref", ref_path, "reference features (.fds or .csv)")->required();
    fid_cmd->add_option("--gen", gen_path, "generated features (.fds or .csv)")->required();
    fid_cmd->add_option("--eps", fid_cfg.eps, "covariance regularizer added as eps*I")
        ->capture_default_str();
    fid_cmd->add_option("--ddof", fid_cfg.ddof, "covariance divisor n - ddof")
        ->check(CLI::IsMember({0, 1}))
        ->capture_default_str();
    fid_cmd->add_flag("--json", json, "structured output");
    fid_cmd->add_option("--threads", threads, "worker cap (output is identical for any value)");

    gandist::SidConfig sid_cfg;
    bool no_standardize = false;
    auto* sid_cmd = app.add_subcommand("sid", "signed kernel-potential distance");
    sid_cmd->add_option("--ref", ref_path, "reference features (.fds or .csv)")->required();
    sid_cmd->add_option("--gen", gen_path, "generated features (.fds or .csv)")->required();
    sid_cmd->add_option("--order-m", sid_cfg.order_m, "kernel order")->capture_default_str();
    sid_cmd->add_option("--side-r", sid_cfg.side_r, "hypercube side length")->capture_default_str();
    sid_cmd->add_option("--batches", sid_cfg.batches_n, "batch count N")->capture_default_str();
    sid_cmd->add_option("--test-points", sid_cfg.test_points_mx, "test points per hypercube")
        ->capture_default_str();
    sid_cmd->add_option("--seed", sid_cfg.seed, "master seed")->capture_default_str();
    sid_cmd->add_option("--kernel-eps", sid_cfg.kernel_eps, "kernel regularizer")
        ->capture_default_str();
    sid_cmd->add_flag("--no-standardize", no_standardize,
                      "evaluate in raw feature units instead of reference-standardized units");
    sid_cmd->add_flag("--json", json, "structured output");
    sid_cmd->add_option("--threads", threads, "worker cap (output is identical for any value)");

    std::string embed_input;
    std::string embed_output;
    std::string embed_role = "ref";
    auto* embed_cmd = app.add_subcommand("embed", "toy-embed a directory of P6 .ppm images");
    embed_cmd->add_option("--input", embed_input, "directory of P6 portable pixmaps")->required();
    embed_cmd->add_option("--output", embed_output, "output .fds path")->required();
    embed_cmd->add_option("--role", embed_role, "role tag")
        ->check(CLI::IsMember({"ref", "gen"}))
        ->capture_default_str();

    std::string manifest_path;
    std::string report_format = "text";
    auto* report_cmd = app.add_subcommand("report", "render a model x dataset score grid");
    report_cmd->add_option("--manifest", manifest_path, "JSON run manifest")->required();
    report_cmd->add_option("--format", report_format, "output format")
        ->check(CLI::IsMember({"text", "structured"}))
        ->capture_default_str();
    report_cmd->add_option("--threads", threads, "worker cap for computed SID entries");

    bool quick = false;
    auto* selftest_cmd = app.add_subcommand("selftest", "run the built-in oracle suite");
    selftest_cmd->add_flag("--quick", quick, "reduced sample sizes");

    int rc = 0;
    fid_cmd->callback([&] { rc = run_fid(ref_path, gen_path, fid_cfg, json); });
    sid_cmd->callback([&] {
        sid_cfg.standardize = !no_standardize;
        rc = run_sid(ref_path, gen_path, sid_cfg, threads, json);
    });
    embed_cmd->callback([&] { rc = run_embed(embed_input, embed_output, embed_role); });
    report_cmd->callback([&] { rc = run_report(manifest_path, report_format, threads); });
    selftest_cmd->callback([&] { rc = run_selftest(quick); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);
        return code == 0 ? 0 : 2;
    } catch (const gandist::InputError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    } catch (const gandist::NumericError& err) {
        std::cerr << "numerical error: " << err.what() << "\n";
        return 3;
    } catch (const std::exception& err) {
        std::cerr << "internal error: " << err.what() << "\n";
        return 3;
    }
    return rc;
}
