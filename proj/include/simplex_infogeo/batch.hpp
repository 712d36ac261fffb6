#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "simplex_infogeo/aggregation.hpp"
#include "simplex_infogeo/composition.hpp"
#include "simplex_infogeo/contrast.hpp"
#include "simplex_infogeo/dataset.hpp"
#include "simplex_infogeo/divergence.hpp"
#include "simplex_infogeo/errors.hpp"
#include "simplex_infogeo/version.hpp"

namespace sig {

// ---------------------------------------------------------------------------
// Deterministic JSON rendering
// ---------------------------------------------------------------------------

/// Streaming JSON writer. Field order is the call order and doubles render
/// through %.17g, so identical inputs produce identical bytes.
class JsonWriter {
public:
    void begin_object() { open('{'); }
    void end_object() { close('}'); }
    void begin_array() { open('['); }
    void end_array() { close(']'); }

    void key(const std::string& k) {
        separate();
        append_string(k);
        out_ += ':';
        pending_value_ = true;
    }

    void value(double v) {
        separate();
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        out_ += buf;
    }
    void value(int v) {
        separate();
        out_ += std::to_string(v);
    }
    void value(bool v) {
        separate();
        out_ += v ? "true" : "false";
    }
    void value(const std::string& v) {
        separate();
        append_string(v);
    }
    void value(const char* v) { value(std::string(v)); }

    const std::string& str() const { return out_; }

private:
    void open(char c) {
        separate();
        out_ += c;
        needs_comma_ = false;
    }
    void close(char c) {
        out_ += c;
        needs_comma_ = true;
    }
    void separate() {
        if (pending_value_) {
            pending_value_ = false;
            return;
        }
        if (needs_comma_) out_ += ',';
        needs_comma_ = true;
    }
    void append_string(const std::string& s) {
        out_ += '"';
        for (char c : s) {
            switch (c) {
                case '"': out_ += "\\\""; break;
                case '\\': out_ += "\\\\"; break;
                case '\n': out_ += "\\n"; break;
                case '\t': out_ += "\\t"; break;
                case '\r': out_ += "\\r"; break;
                default: out_ += c;
            }
        }
        out_ += '"';
    }

    std::string out_;
    bool needs_comma_ = false;
    bool pending_value_ = false;
};

// ---------------------------------------------------------------------------
// Run configuration
// ---------------------------------------------------------------------------

enum class Measure { aitchison, kl, kl_reverse, alpha, hellinger, fisher, bhattacharyya, boxcox, f };

inline const char* to_string(Measure m) {
    switch (m) {
        case Measure::aitchison: return "aitchison";
        case Measure::kl: return "kl";
        case Measure::kl_reverse: return "kl_reverse";
        case Measure::alpha: return "alpha";
        case Measure::hellinger: return "hellinger";
        case Measure::fisher: return "fisher";
        case Measure::bhattacharyya: return "bhattacharyya";
        case Measure::boxcox: return "boxcox";
        case Measure::f: return "f";
    }
    return "?";
}

enum class OutputFormat { json, csv };

struct ContrastChoice {
    enum class Kind { helmert, pivot, file };
    Kind kind = Kind::helmert;
    std::string path;  // for Kind::file

    static ContrastChoice parse(const std::string& text) {
        if (text == "helmert") return {Kind::helmert, ""};
        if (text == "pivot") return {Kind::pivot, ""};
        const std::string prefix = "file:";
        if (text.rfind(prefix, 0) == 0) return {Kind::file, text.substr(prefix.size())};
        throw ParameterOutOfRange("contrast must be helmert, pivot or file:<path>");
    }

    std::string label() const {
        switch (kind) {
            case Kind::helmert: return "helmert";
            case Kind::pivot: return "pivot";
            case Kind::file: return "file:" + path;
        }
        return "?";
    }
};

/// Everything one batch run needs besides the dataset itself.
struct RunConfig {
    Measure measure = Measure::aitchison;
    double alpha = 0.0;
    bool has_alpha = false;
    double beta = 0.0;
    bool has_beta = false;
    std::vector<double> weights;  // boxcox; one value broadcasts to all parts
    std::string f_name;           // named convex function for measure f
    ContrastChoice contrast;
    std::vector<std::string> subset_names;
    AggregationMode mode = AggregationMode::amalgam;
    OutputFormat format = OutputFormat::json;
};

inline Measure parse_measure(const std::string& text, RunConfig& cfg) {
    if (text == "aitchison") return Measure::aitchison;
    if (text == "kl") return Measure::kl;
    if (text == "kl_reverse") return Measure::kl_reverse;
    if (text == "alpha") return Measure::alpha;
    if (text == "hellinger") return Measure::hellinger;
    if (text == "fisher") return Measure::fisher;
    if (text == "bhattacharyya") return Measure::bhattacharyya;
    if (text == "boxcox") return Measure::boxcox;
    if (text == "f" || text.rfind("f:", 0) == 0) {
        cfg.f_name = text == "f" ? "neglog" : text.substr(2);
        if (cfg.f_name != "neglog" && cfg.f_name != "sqrt")
            throw ParameterOutOfRange("measure f supports f:neglog and f:sqrt");
        return Measure::f;
    }
    throw ParameterOutOfRange("unknown measure '" + text + "'");
}

inline std::function<double(double)> named_convex_function(const std::string& name) {
    if (name == "neglog") return [](double t) { return -std::log(t); };
    if (name == "sqrt")
        return [](double t) {
            const double d = std::sqrt(t) - 1.0;
            return d * d;
        };
    throw ParameterOutOfRange("unknown convex function '" + name + "'");
}

/// Expand the weights field to the dataset dimension (broadcast a single
/// value); validate parameter presence against the measure.
inline Eigen::VectorXd resolve_weights(const RunConfig& cfg, int dim) {
    if (cfg.weights.size() == 1) return Eigen::VectorXd::Constant(dim, cfg.weights[0]);
    if (static_cast<int>(cfg.weights.size()) == dim)
        return Eigen::Map<const Eigen::VectorXd>(cfg.weights.data(), dim);
    throw ParameterOutOfRange("weights need 1 or " + std::to_string(dim) + " values, got " +
                              std::to_string(cfg.weights.size()));
}

inline void validate_config(const RunConfig& cfg) {
    if (cfg.measure == Measure::alpha && !cfg.has_alpha)
        throw ParameterOutOfRange("measure alpha requires --alpha");
    if (cfg.measure == Measure::boxcox && !cfg.has_beta)
        throw ParameterOutOfRange("measure boxcox requires --beta");
    if (cfg.measure == Measure::boxcox && cfg.weights.empty())
        throw ParameterOutOfRange("measure boxcox requires --weights");
    if (cfg.measure == Measure::f && cfg.f_name.empty())
        throw ParameterOutOfRange("measure f requires a named convex function");
}

inline bool measure_symmetric(const RunConfig& cfg) {
    switch (cfg.measure) {
        case Measure::aitchison:
        case Measure::hellinger:
        case Measure::fisher:
        case Measure::bhattacharyya:
        case Measure::boxcox: return true;
        case Measure::alpha: return cfg.alpha == 0.0;
        case Measure::kl:
        case Measure::kl_reverse:
        case Measure::f: return false;
    }
    return false;
}

/// Self-measure placed on the diagonal: zero for every measure except the
/// Bhattacharyya coefficient, whose self-value is one.
inline double measure_diagonal(const RunConfig& cfg) {
    return cfg.measure == Measure::bhattacharyya ? 1.0 : 0.0;
}

inline double measure_value(const RunConfig& cfg, const Eigen::VectorXd& weights,
                            const Composition& x, const Composition& y) {
    switch (cfg.measure) {
        case Measure::aitchison: return aitchison_dist2(x, y);
        case Measure::kl: return kl(x, y).value;
        case Measure::kl_reverse: return kl_reverse(x, y).value;
        case Measure::alpha: return alpha_divergence(cfg.alpha, x, y).value;
        case Measure::hellinger: return hellinger(x, y);
        case Measure::fisher: return fisher_distance(x, y);
        case Measure::bhattacharyya: return bhattacharyya(x, y);
        case Measure::boxcox: return boxcox_distance_sq(cfg.beta, weights, x, y);
        case Measure::f: return f_divergence(named_convex_function(cfg.f_name), x, y).value;
    }
    throw ParameterOutOfRange("unknown measure");
}

// ---------------------------------------------------------------------------
// Parallel pairwise evaluation
// ---------------------------------------------------------------------------

/// Worker count: SIMPLEX_INFOGEO_THREADS caps parallelism, 0 or unset = auto.
inline int thread_cap() {
    const char* env = std::getenv("SIMPLEX_INFOGEO_THREADS");
    long parsed = 0;
    if (env != nullptr) {
        char* end = nullptr;
        parsed = std::strtol(env, &end, 10);
        if (end == env || parsed < 0) parsed = 0;
    }
    if (parsed == 0) {
        const unsigned hw = std::thread::hardware_concurrency();
        return hw == 0 ? 1 : static_cast<int>(hw);
    }
    return static_cast<int>(parsed);
}

namespace detail {

/// Run `work(k)` for k in [0, n) on up to thread_cap() workers with a static
/// stride partition. Output placement is by index, so the schedule cannot
/// change any output byte.
inline void parallel_for(int n, const std::function<void(int)>& work) {
    const int threads = std::max(1, std::min(thread_cap(), n));
    if (threads == 1) {
        for (int k = 0; k < n; ++k) work(k);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&, w]() {
            for (int k = w; k < n; k += threads) work(k);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace detail

struct DistanceMatrixResult {
    Eigen::MatrixXd values;
    bool symmetric;
};

/// Pairwise measure matrix over all samples. Symmetric measures are computed
/// once per unordered pair and mirrored; the diagonal holds the self-measure.
inline DistanceMatrixResult distance_matrix(const Dataset& ds, const RunConfig& cfg) {
    validate_config(cfg);
    const int n = ds.size();
    Eigen::VectorXd weights;
    if (cfg.measure == Measure::boxcox) weights = resolve_weights(cfg, ds.dim());

    Eigen::MatrixXd m = Eigen::MatrixXd::Constant(n, n, measure_diagonal(cfg));
    const bool symmetric = measure_symmetric(cfg);

    std::vector<std::pair<int, int>> jobs;
    for (int i = 0; i < n; ++i)
        for (int j = symmetric ? i + 1 : 0; j < n; ++j)
            if (i != j) jobs.emplace_back(i, j);

    detail::parallel_for(static_cast<int>(jobs.size()), [&](int k) {
        const auto [i, j] = jobs[static_cast<std::size_t>(k)];
        const double v = measure_value(cfg, weights, ds.samples[i], ds.samples[j]);
        m(i, j) = v;
        if (symmetric) m(j, i) = v;
    });
    return {std::move(m), symmetric};
}

// ---------------------------------------------------------------------------
// Structured reports
// ---------------------------------------------------------------------------

inline PartSubset resolve_subset(const Dataset& ds, const std::vector<std::string>& names) {
    if (names.empty()) throw ParameterOutOfRange("subset needs at least one part name");
    std::vector<int> idx;
    idx.reserve(names.size());
    for (const std::string& name : names) {
        int found = -1;
        for (int j = 0; j < ds.dim(); ++j)
            if (ds.part_names[j] == name) {
                found = j;
                break;
            }
        if (found < 0) throw UnknownPartName("part '" + name + "' is not in the header");
        idx.push_back(found);
    }
    return PartSubset(ds.dim(), idx);
}

struct ReportResult {
    std::string text;
    bool pass;
};

namespace detail {

inline void write_metadata(JsonWriter& w, const char* command) {
    w.key("schema");
    w.value(1);
    w.key("command");
    w.value(command);
    w.key("library_version");
    w.value(kVersion);
}

inline void write_decomposition(JsonWriter& w, const DecompositionReport& rep) {
    w.begin_object();
    w.key("identity");
    w.value(rep.identity);
    w.key("lhs");
    w.value(rep.lhs);
    w.key("terms");
    w.begin_array();
    for (const auto& [name, value] : rep.terms) {
        w.begin_object();
        w.key("name");
        w.value(name);
        w.key("value");
        w.value(value);
        w.end_object();
    }
    w.end_array();
    w.key("residual");
    w.value(rep.residual);
    w.end_object();
}

}  // namespace detail

/// Distance-matrix document. Field order and number rendering are fixed;
/// identical inputs give identical bytes regardless of thread count.
inline std::string render_distance_json(const Dataset& ds, const RunConfig& cfg,
                                        const DistanceMatrixResult& result) {
    JsonWriter w;
    w.begin_object();
    detail::write_metadata(w, "distance");
    w.key("measure");
    w.value(to_string(cfg.measure));
    w.key("parameters");
    w.begin_object();
    if (cfg.measure == Measure::alpha) {
        w.key("alpha");
        w.value(cfg.alpha);
    }
    if (cfg.measure == Measure::boxcox) {
        w.key("beta");
        w.value(cfg.beta);
        w.key("weights");
        w.begin_array();
        const Eigen::VectorXd weights = resolve_weights(cfg, ds.dim());
        for (Eigen::Index i = 0; i < weights.size(); ++i) w.value(weights[i]);
        w.end_array();
    }
    if (cfg.measure == Measure::f) {
        w.key("f");
        w.value(cfg.f_name);
    }
    w.end_object();
    w.key("symmetric");
    w.value(result.symmetric);
    w.key("sample_ids");
    w.begin_array();
    for (const auto& id : ds.sample_ids) w.value(id);
    w.end_array();
    w.key("matrix");
    w.begin_array();
    for (int i = 0; i < ds.size(); ++i) {
        w.begin_array();
        for (int j = 0; j < ds.size(); ++j) w.value(result.values(i, j));
        w.end_array();
    }
    w.end_array();
    w.end_object();
    return w.str();
}

/// CSV convenience export of the same matrix.
inline std::string render_distance_csv(const Dataset& ds, const DistanceMatrixResult& result) {
    std::string out = "id";
    for (const auto& id : ds.sample_ids) {
        out += ',';
        out += id;
    }
    out += '\n';
    char buf[40];
    for (int i = 0; i < ds.size(); ++i) {
        out += ds.sample_ids[i];
        for (int j = 0; j < ds.size(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", result.values(i, j));
            out += ',';
            out += buf;
        }
        out += '\n';
    }
    return out;
}

inline constexpr double kEntropyResidualTol = 1e-12;
inline constexpr double kNormResidualTol = 1e-10;
inline constexpr double kMarginTol = -1e-12;

/// Per-sample entropy and norm decompositions for the configured mode, plus
/// per-pair distance decompositions in amalgam/geomean modes. Passes when
/// every residual is within tolerance.
inline ReportResult decompose_report(const Dataset& ds, const RunConfig& cfg) {
    const PartSubset subset = resolve_subset(ds, cfg.subset_names);
    bool pass = true;

    JsonWriter w;
    w.begin_object();
    detail::write_metadata(w, "decompose");
    w.key("mode");
    w.value(to_string(cfg.mode));
    w.key("subset");
    w.begin_array();
    for (const auto& name : cfg.subset_names) w.value(name);
    w.end_array();
    w.key("samples");
    w.begin_array();
    for (int i = 0; i < ds.size(); ++i) {
        w.begin_object();
        w.key("id");
        w.value(ds.sample_ids[i]);
        if (cfg.mode != AggregationMode::geomean) {
            const EntropyMode emode = cfg.mode == AggregationMode::subcomp
                                          ? EntropyMode::subcomp
                                          : EntropyMode::amalgam;
            const DecompositionReport rep = entropy_decomposition(ds.samples[i], subset, emode);
            pass = pass && std::abs(rep.residual) <= kEntropyResidualTol;
            w.key("entropy");
            detail::write_decomposition(w, rep);
        }
        const DecompositionReport rep = norm_decomposition(ds.samples[i], subset, cfg.mode);
        pass = pass && std::abs(rep.residual) <= kNormResidualTol;
        w.key("norm");
        detail::write_decomposition(w, rep);
        w.end_object();
    }
    w.end_array();
    if (cfg.mode != AggregationMode::subcomp) {
        w.key("pairs");
        w.begin_array();
        for (int i = 0; i < ds.size(); ++i)
            for (int j = i + 1; j < ds.size(); ++j) {
                const DecompositionReport rep =
                    distance_decomposition(ds.samples[i], ds.samples[j], subset, cfg.mode);
                pass = pass && std::abs(rep.residual) <= kNormResidualTol;
                w.begin_object();
                w.key("i");
                w.value(ds.sample_ids[i]);
                w.key("j");
                w.value(ds.sample_ids[j]);
                w.key("distance");
                detail::write_decomposition(w, rep);
                w.end_object();
            }
        w.end_array();
    }
    w.key("all_checks_pass");
    w.value(pass);
    w.end_object();
    return {w.str(), pass};
}

/// Monotonicity audit over every ordered pair: Aitchison distance and
/// relative entropy may only shrink under amalgamation of the subset.
inline ReportResult monotonicity_report(const Dataset& ds, const RunConfig& cfg) {
    const PartSubset subset = resolve_subset(ds, cfg.subset_names);
    bool pass = true;

    JsonWriter w;
    w.begin_object();
    detail::write_metadata(w, "monotonicity-audit");
    w.key("subset");
    w.begin_array();
    for (const auto& name : cfg.subset_names) w.value(name);
    w.end_array();
    w.key("pairs");
    w.begin_array();
    for (int i = 0; i < ds.size(); ++i)
        for (int j = 0; j < ds.size(); ++j) {
            if (i == j) continue;
            const MonotonicityAudit audit = monotonicity_audit(ds.samples[i], ds.samples[j], subset);
            pass = pass && audit.aitchison_margin >= kMarginTol && audit.kl_margin >= kMarginTol;
            w.begin_object();
            w.key("i");
            w.value(ds.sample_ids[i]);
            w.key("j");
            w.value(ds.sample_ids[j]);
            w.key("aitchison_before");
            w.value(audit.aitchison_before);
            w.key("aitchison_after");
            w.value(audit.aitchison_after);
            w.key("aitchison_margin");
            w.value(audit.aitchison_margin);
            w.key("kl_before");
            w.value(audit.kl_before);
            w.key("kl_after");
            w.value(audit.kl_after);
            w.key("kl_margin");
            w.value(audit.kl_margin);
            w.end_object();
        }
    w.end_array();
    w.key("all_margins_nonnegative");
    w.value(pass);
    w.end_object();
    return {w.str(), pass};
}

/// Validate a contrast matrix: a user file as-is, or a named construction at
/// the dataset dimension (which should always pass).
inline ReportResult contrast_validate_report(const RunConfig& cfg, int dim) {
    Eigen::MatrixXd m;
    if (cfg.contrast.kind == ContrastChoice::Kind::file) {
        m = read_matrix_csv(cfg.contrast.path);
    } else {
        const ContrastKind kind = cfg.contrast.kind == ContrastChoice::Kind::helmert
                                      ? ContrastKind::helmert
                                      : ContrastKind::pivot;
        m = build_contrast(dim, kind).entries();
    }
    const ContrastValidation v = validate_contrast(m);

    JsonWriter w;
    w.begin_object();
    detail::write_metadata(w, "contrast-validate");
    w.key("contrast");
    w.value(cfg.contrast.label());
    w.key("dim");
    w.value(static_cast<int>(m.rows()));
    w.key("orthonormality_deviation");
    w.value(v.orthonormality_deviation);
    w.key("centering_deviation");
    w.value(v.centering_deviation);
    w.key("tolerance");
    w.value(kContrastTol);
    w.key("pass");
    w.value(v.pass);
    w.end_object();
    return {w.str(), v.pass};
}

}  // namespace sig
