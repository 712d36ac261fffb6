// Command-line front end: CSV in, deterministic JSON (or CSV matrix) out.
// Exit codes: 0 success, 1 validation failure, 2 input error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "simplex_infogeo/simplex_infogeo.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidationFailure = 1;
constexpr int kExitInputError = 2;

std::vector<std::string> split_names(const std::string& csv) {
    std::vector<std::string> names;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) names.push_back(item);
    }
    return names;
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text << "\n";
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw sig::ParseError("cannot open output file '" + path + "'", 0, 0);
    out << text;
}

struct CliOptions {
    std::string input;
    std::string measure = "aitchison";
    double alpha = 0.0;
    bool has_alpha = false;
    double beta = 0.0;
    bool has_beta = false;
    std::string weights;
    std::string contrast = "helmert";
    std::string zero_policy = "error";
    std::string subset;
    std::string mode = "amalgam";
    std::string out;
    std::string format = "json";
};

sig::RunConfig build_config(const CliOptions& opt) {
    sig::RunConfig cfg;
    cfg.measure = sig::parse_measure(opt.measure, cfg);
    cfg.alpha = opt.alpha;
    cfg.has_alpha = opt.has_alpha;
    cfg.beta = opt.beta;
    cfg.has_beta = opt.has_beta;
    if (!opt.weights.empty()) {
        for (const std::string& cell : split_names(opt.weights)) {
            try {
                cfg.weights.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw sig::ParameterOutOfRange("cannot parse weight '" + cell + "'");
            }
        }
    }
    cfg.contrast = sig::ContrastChoice::parse(opt.contrast);
    cfg.subset_names = split_names(opt.subset);
    if (opt.mode == "subcomp") cfg.mode = sig::AggregationMode::subcomp;
    else if (opt.mode == "amalgam") cfg.mode = sig::AggregationMode::amalgam;
    else if (opt.mode == "geomean") cfg.mode = sig::AggregationMode::geomean;
    else throw sig::ParameterOutOfRange("mode must be subcomp, amalgam or geomean");
    if (opt.format == "json") cfg.format = sig::OutputFormat::json;
    else if (opt.format == "csv") cfg.format = sig::OutputFormat::csv;
    else throw sig::ParameterOutOfRange("format must be json or csv");
    return cfg;
}

void add_common_flags(CLI::App* cmd, CliOptions& opt, bool needs_input) {
    auto* input = cmd->add_option("--input", opt.input, "CSV file: header of part names, one sample per row");
    if (needs_input) input->required();
    cmd->add_option("--zero-policy", opt.zero_policy, "error | replace:<eps> (default error)");
    cmd->add_option("--out", opt.out, "output file (default stdout)");
    cmd->add_option("--format", opt.format, "json | csv (csv only for distance)");
    cmd->add_option("--contrast", opt.contrast, "helmert | pivot | file:<path>");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Information-geometric calculations on compositional data"};
    app.require_subcommand(1);

    CliOptions opt;

    CLI::App* distance = app.add_subcommand("distance", "pairwise measure matrix over all samples");
    add_common_flags(distance, opt, true);
    distance->add_option("--measure", opt.measure,
                         "aitchison | kl | kl_reverse | alpha | hellinger | fisher | "
                         "bhattacharyya | boxcox | f:neglog | f:sqrt");
    distance->add_option("--alpha", opt.alpha, "alpha-divergence parameter");
    distance->add_option("--beta", opt.beta, "Box-Cox exponent");
    distance->add_option("--weights", opt.weights, "Box-Cox weights: one value or D comma-separated");

    CLI::App* decompose = app.add_subcommand("decompose", "entropy/norm/distance decompositions over a subset");
    add_common_flags(decompose, opt, true);
    decompose->add_option("--subset", opt.subset, "comma-separated part names")->required();
    decompose->add_option("--mode", opt.mode, "subcomp | amalgam | geomean");

    CLI::App* audit = app.add_subcommand("monotonicity-audit",
                                         "amalgamation monotonicity margins for every sample pair");
    add_common_flags(audit, opt, true);
    audit->add_option("--subset", opt.subset, "comma-separated part names")->required();

    CLI::App* contrast = app.add_subcommand("contrast-validate",
                                            "check the two contrast-matrix conditions");
    add_common_flags(contrast, opt, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitInputError;
    }
    opt.has_alpha = distance->count("--alpha") > 0;
    opt.has_beta = distance->count("--beta") > 0;

    try {
        const sig::RunConfig cfg = build_config(opt);
        const sig::ZeroPolicy policy = sig::ZeroPolicy::parse(opt.zero_policy);

        if (distance->parsed()) {
            sig::validate_config(cfg);
            const sig::Dataset ds = sig::ingest_csv(opt.input, policy);
            const sig::DistanceMatrixResult result = sig::distance_matrix(ds, cfg);
            write_output(opt.out, cfg.format == sig::OutputFormat::csv
                                      ? sig::render_distance_csv(ds, result)
                                      : sig::render_distance_json(ds, cfg, result));
            return kExitOk;
        }
        if (cfg.format == sig::OutputFormat::csv)
            throw sig::ParameterOutOfRange("--format csv is only available for distance");
        if (decompose->parsed()) {
            const sig::Dataset ds = sig::ingest_csv(opt.input, policy);
            const sig::ReportResult result = sig::decompose_report(ds, cfg);
            write_output(opt.out, result.text);
            return result.pass ? kExitOk : kExitValidationFailure;
        }
        if (audit->parsed()) {
            const sig::Dataset ds = sig::ingest_csv(opt.input, policy);
            const sig::ReportResult result = sig::monotonicity_report(ds, cfg);
            write_output(opt.out, result.text);
            return result.pass ? kExitOk : kExitValidationFailure;
        }
        if (contrast->parsed()) {
            int dim = 0;
            if (cfg.contrast.kind != sig::ContrastChoice::Kind::file) {
                if (opt.input.empty())
                    throw sig::ParameterOutOfRange(
                        "contrast-validate needs --input (for the dimension) or --contrast file:<path>");
                dim = sig::ingest_csv(opt.input, policy).dim();
            }
            const sig::ReportResult result = sig::contrast_validate_report(cfg, dim);
            write_output(opt.out, result.text);
            if (!result.pass) std::cerr << "contrast conditions violated\n";
            return result.pass ? kExitOk : kExitValidationFailure;
        }
    } catch (const sig::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitInputError;
}
