#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gandist/core.hpp"
#include "gandist/error.hpp"
#include "gandist/fid.hpp"
#include "gandist/io.hpp"
#include "gandist/sid.hpp"

namespace gandist {

/// One manifest line: a (model, dataset, epoch) cell with either published
/// literal scores or feature-file paths to compute them from.
struct ManifestEntry {
    std::string model;
    std::string dataset;
    std::int64_t epoch = 0;
    std::optional<double> fid_literal;
    std::optional<double> sid_literal;
    std::filesystem::path ref_path;
    std::filesystem::path gen_path;
    bool compute_fid = false;
    bool compute_sid = false;
    FidConfig fid_cfg;
    SidConfig sid_cfg;
};

struct RunManifest {
    std::vector<ManifestEntry> entries;
};

/// A rendered grid cell; at least one of the two scores is present.
struct ReportRow {
    std::string model;
    std::string dataset;
    std::int64_t epoch = 0;
    std::optional<MetricScore> fid;
    std::optional<MetricScore> sid;
};

namespace detail {

inline double require_number(const nlohmann::json& value, const std::string& what) {
    if (!value.is_number()) throw InputError(ErrorCode::BadManifest, what + " must be a number");
    return value.get<double>();
}

inline FidConfig parse_fid_config(const nlohmann::json& obj) {
    FidConfig cfg;
    if (obj.contains("eps")) cfg.eps = require_number(obj.at("eps"), "fid_config.eps");
    if (obj.contains("ddof")) cfg.ddof = obj.at("ddof").get<int>();
    cfg.validate();
    return cfg;
}

inline SidConfig parse_sid_config(const nlohmann::json& obj) {
    SidConfig cfg;
    if (obj.contains("order_m")) cfg.order_m = obj.at("order_m").get<int>();
    if (obj.contains("side_r")) cfg.side_r = require_number(obj.at("side_r"), "sid_config.side_r");
    if (obj.contains("batches_n")) cfg.batches_n = obj.at("batches_n").get<int>();
    if (obj.contains("test_points_mx")) cfg.test_points_mx = obj.at("test_points_mx").get<int>();
    if (obj.contains("seed")) cfg.seed = obj.at("seed").get<std::uint64_t>();
    if (obj.contains("kernel_eps"))
        cfg.kernel_eps = require_number(obj.at("kernel_eps"), "sid_config.kernel_eps");
    if (obj.contains("standardize")) cfg.standardize = obj.at("standardize").get<bool>();
    cfg.validate();
    return cfg;
}

}  // namespace detail

/// Parses a JSON manifest. Relative feature paths resolve against the
/// manifest's directory; referenced files must exist at load time.
inline RunManifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError(ErrorCode::IoFailure, "cannot open: " + path.string());
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& err) {
        throw InputError(ErrorCode::BadManifest, path.string() + ": " + err.what());
    }
    if (!doc.is_object() || !doc.contains("rows") || !doc.at("rows").is_array()) {
        throw InputError(ErrorCode::BadManifest,
                         path.string() + ": top level must be {\"rows\": [...]}");
    }
    const auto base_dir = path.has_parent_path() ? path.parent_path()
                                                 : std::filesystem::path(".");
    RunManifest manifest;
    std::size_t index = 0;
    for (const auto& row : doc.at("rows")) {
        const std::string where = path.string() + ": rows[" + std::to_string(index) + "]";
        ++index;
        if (!row.is_object()) throw InputError(ErrorCode::BadManifest, where + " must be an object");
        ManifestEntry entry;
        try {
            entry.model = row.at("model").get<std::string>();
            entry.dataset = row.at("dataset").get<std::string>();
            entry.epoch = row.at("epoch").get<std::int64_t>();
            if (row.contains("fid"))
                entry.fid_literal = detail::require_number(row.at("fid"), where + ".fid");
            if (row.contains("sid"))
                entry.sid_literal = detail::require_number(row.at("sid"), where + ".sid");
            const bool has_paths = row.contains("ref") || row.contains("gen");
            if (has_paths) {
                if (!row.contains("ref") || !row.contains("gen")) {
                    throw InputError(ErrorCode::BadManifest,
                                     where + " needs both ref and gen paths");
                }
                auto resolve = [&base_dir](const std::string& p) {
                    const std::filesystem::path raw(p);
                    return raw.is_absolute() ? raw : base_dir / raw;
                };
                entry.ref_path = resolve(row.at("ref").get<std::string>());
                entry.gen_path = resolve(row.at("gen").get<std::string>());
                for (const auto& fp : {entry.ref_path, entry.gen_path}) {
                    if (!std::filesystem::exists(fp)) {
                        throw InputError(ErrorCode::BadManifest,
                                         where + " references missing file " + fp.string());
                    }
                }
                entry.compute_fid = true;
                entry.compute_sid = true;
                if (row.contains("metrics")) {
                    entry.compute_fid = false;
                    entry.compute_sid = false;
                    for (const auto& metric : row.at("metrics")) {
                        const auto name = metric.get<std::string>();
                        if (name == "fid") entry.compute_fid = true;
                        else if (name == "sid") entry.compute_sid = true;
                        else throw InputError(ErrorCode::BadManifest,
                                              where + ": unknown metric " + name);
                    }
                }
                if (row.contains("fid_config"))
                    entry.fid_cfg = detail::parse_fid_config(row.at("fid_config"));
                if (row.contains("sid_config"))
                    entry.sid_cfg = detail::parse_sid_config(row.at("sid_config"));
            }
        } catch (const nlohmann::json::exception& err) {
            throw InputError(ErrorCode::BadManifest, where + ": " + err.what());
        }
        if (!entry.fid_literal && !entry.sid_literal && !entry.compute_fid && !entry.compute_sid) {
            throw InputError(ErrorCode::BadManifest, where + " carries no score at all");
        }
        manifest.entries.push_back(std::move(entry));
    }
    return manifest;
}

/// Resolves every manifest entry into scores: literals pass through, feature
/// paths are loaded and computed.
inline std::vector<ReportRow> build_report(const RunManifest& manifest, int threads = 0) {
    std::vector<ReportRow> rows;
    rows.reserve(manifest.entries.size());
    for (const auto& entry : manifest.entries) {
        ReportRow row;
        row.model = entry.model;
        row.dataset = entry.dataset;
        row.epoch = entry.epoch;
        if (entry.fid_literal) {
            row.fid = MetricScore{MetricKind::Fid, *entry.fid_literal, "literal", 0, 0, false};
        }
        if (entry.sid_literal) {
            row.sid = MetricScore{MetricKind::Sid, *entry.sid_literal, "literal", 0, 0, false};
        }
        if (entry.compute_fid || entry.compute_sid) {
            const FeatureSet ref = load_features_auto(entry.ref_path, Role::Reference);
            const FeatureSet gen = load_features_auto(entry.gen_path, Role::Generated);
            if (entry.compute_fid && !row.fid) row.fid = fid_from_features(ref, gen, entry.fid_cfg);
            if (entry.compute_sid && !row.sid) row.sid = sid_score(ref, gen, entry.sid_cfg, threads);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace detail {

inline std::string format_value(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f", value);
    return buf;
}

inline std::string epoch_label(const std::string& model, std::int64_t epoch) {
    return model + " after " + std::to_string(epoch) + (epoch == 1 ? " epoch" : " epochs");
}

}  // namespace detail

/// Renders the model x dataset grid with FID and SID columns per dataset,
/// 4-decimal values. Row and column order follow first appearance in the
/// manifest.
inline std::string render_report_text(const std::vector<ReportRow>& rows) {
    std::vector<std::pair<std::string, std::int64_t>> row_keys;
    std::vector<std::string> datasets;
    for (const auto& row : rows) {
        const auto key = std::make_pair(row.model, row.epoch);
        if (std::find(row_keys.begin(), row_keys.end(), key) == row_keys.end()) {
            row_keys.push_back(key);
        }
        if (std::find(datasets.begin(), datasets.end(), row.dataset) == datasets.end()) {
            datasets.push_back(row.dataset);
        }
    }

    const auto cell = [&rows](const std::pair<std::string, std::int64_t>& key,
                              const std::string& dataset) -> const ReportRow* {
        for (const auto& row : rows) {
            if (row.model == key.first && row.epoch == key.second && row.dataset == dataset) {
                return &row;
            }
        }
        return nullptr;
    };

    std::size_t label_width = 5;
    for (const auto& key : row_keys) {
        label_width = std::max(label_width, detail::epoch_label(key.first, key.second).size());
    }
    std::vector<std::size_t> fid_width(datasets.size(), 3);
    std::vector<std::size_t> sid_width(datasets.size(), 3);
    for (std::size_t d = 0; d < datasets.size(); ++d) {
        for (const auto& key : row_keys) {
            if (const ReportRow* row = cell(key, datasets[d])) {
                if (row->fid) fid_width[d] = std::max(fid_width[d],
                                                      detail::format_value(row->fid->value).size());
                if (row->sid) sid_width[d] = std::max(sid_width[d],
                                                      detail::format_value(row->sid->value).size());
            }
        }
        fid_width[d] = std::max(fid_width[d], datasets[d].size());
    }

    std::string out;
    const auto pad = [](const std::string& text, std::size_t width) {
        std::string padded = text;
        padded.resize(std::max(width, text.size()), ' ');
        return padded;
    };
    out += pad("Model", label_width);
    for (std::size_t d = 0; d < datasets.size(); ++d) {
        out += "  " + pad(datasets[d], fid_width[d] + 2 + sid_width[d]);
    }
    out += "\n";
    out += pad("", label_width);
    for (std::size_t d = 0; d < datasets.size(); ++d) {
        out += "  " + pad("FID", fid_width[d]) + "  " + pad("SID", sid_width[d]);
    }
    out += "\n";
    for (const auto& key : row_keys) {
        out += pad(detail::epoch_label(key.first, key.second), label_width);
        for (std::size_t d = 0; d < datasets.size(); ++d) {
            const ReportRow* row = cell(key, datasets[d]);
            const std::string fid_text =
                row && row->fid ? detail::format_value(row->fid->value) : "-";
            const std::string sid_text =
                row && row->sid ? detail::format_value(row->sid->value) : "-";
            out += "  " + pad(fid_text, fid_width[d]) + "  " + pad(sid_text, sid_width[d]);
        }
        out += "\n";
    }
    return out;
}

/// Structured form: one object per manifest row, stable field set.
inline nlohmann::ordered_json render_report_json(const std::vector<ReportRow>& rows) {
    nlohmann::ordered_json doc;
    doc["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : rows) {
        nlohmann::ordered_json item;
        item["model"] = row.model;
        item["dataset"] = row.dataset;
        item["epoch"] = row.epoch;
        item["fid"] = row.fid ? nlohmann::ordered_json(row.fid->value)
                              : nlohmann::ordered_json(nullptr);
        item["sid"] = row.sid ? nlohmann::ordered_json(row.sid->value)
                              : nlohmann::ordered_json(nullptr);
        doc["rows"].push_back(std::move(item));
    }
    return doc;
}

}  // namespace gandist
