// Copyright 2026 The sedkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <stdexcept>

#if __has_include(<CLI/CLI.hpp>)
#include <CLI/CLI.hpp>
#else
#include <CLI11.hpp>
#endif

#include "sedkit/sedkit.hpp"

namespace sedkit::cli {

namespace {

/// Unreadable or unparseable input; always exit code 2.
class InputError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class Io {
  public:
    Io(std::istream& in, std::ostream& out, std::ostream& err) : in_(in), out(out), err(err) {}

    std::string read(const std::string& path) {
        if (path == "-") {
            if (stdin_used_) {
                throw InputError("standard input can only be read once");
            }
            stdin_used_ = true;
            return {std::istreambuf_iterator<char>(in_), std::istreambuf_iterator<char>()};
        }
        std::ifstream file(path, std::ios::binary);
        if (!file) {
            throw InputError(path + ": cannot open file");
        }
        std::ostringstream buffer;
        buffer << file.rdbuf();
        return buffer.str();
    }

  private:
    std::istream& in_;
    bool stdin_used_ = false;

  public:
    std::ostream& out;
    std::ostream& err;
};

template <typename Parse>
auto parse_file(Io& io, const std::string& path, Parse parse) {
    const std::string content = io.read(path);
    try {
        return parse(content);
    } catch (const ParseError& e) {
        throw InputError(e.line() == 0 ? path + ": " + e.detail()
                                       : path + ":" + std::to_string(e.line()) + ": " + e.detail());
    }
}

std::vector<ClassLabel> read_class_list(Io& io, const std::string& path) {
    const std::string content = io.read(path);
    std::vector<ClassLabel> classes;
    std::istringstream lines(content);
    std::string line;
    std::size_t number = 0;
    while (std::getline(lines, line)) {
        ++number;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) {
            continue;
        }
        const auto last = line.find_last_not_of(" \t\r");
        const std::string label = line.substr(first, last - first + 1);
        if (!ClassLabel::is_valid(label)) {
            throw InputError(path + ":" + std::to_string(number) + ": invalid class label '" + label + "'");
        }
        classes.emplace_back(label);
    }
    return classes;
}

StrongAnnotationSet normalize_set(const StrongAnnotationSet& set, const NormalizeConfig& cfg) {
    StrongAnnotationSet out;
    for (const auto& [clip, events] : set.entries()) {
        const auto kept = normalize(events, cfg);
        if (!kept.empty()) {
            out.add(clip, kept);
        }
    }
    return out;
}

struct NormalizeFlags {
    double min_gap = NormalizeConfig{}.min_gap;
    double min_duration = NormalizeConfig{}.min_event_duration;

    void attach(CLI::App& cmd) {
        cmd.add_option("--min-gap", min_gap, "Same-class pause below which events merge (s)")->capture_default_str();
        cmd.add_option("--min-duration", min_duration, "Minimum event duration (s)")->capture_default_str();
    }

    [[nodiscard]] NormalizeConfig config() const {
        NormalizeConfig cfg;
        cfg.min_gap = min_gap;
        cfg.min_event_duration = min_duration;
        return cfg;
    }
};

// ---------------------------------------------------------------------------

struct EvaluateOptions {
    std::string ref_path;
    std::string sys_path;
    EvalConfig eval;
    std::string classes_path;
    bool normalize = false;
    NormalizeFlags norm;
    std::string format = "table";
    unsigned jobs = 1;
};

int cmd_evaluate(Io& io, const EvaluateOptions& opt) {
    const auto ref = parse_file(io, opt.ref_path, parse_strong);
    auto sys = parse_file(io, opt.sys_path, parse_strong);
    if (opt.normalize) {
        sys = normalize_set(sys, opt.norm.config());
    }
    EvalOptions options;
    options.jobs = opt.jobs;
    if (!opt.classes_path.empty()) {
        options.classes = read_class_list(io, opt.classes_path);
    }
    const EvalReport report = evaluate(ref, sys, opt.eval, options);
    if (opt.format == "json") {
        io.out << render_report_json(report);
    } else if (opt.format == "jsonl") {
        io.out << render_report_jsonl(report);
    } else {
        io.out << render_report_table(report);
    }
    return kSuccess;
}

struct ValidateOptions {
    std::string path;
    std::string kind = "strong";
    bool strict = false;
    NormalizeFlags norm;
    double max_clip = 10.0;
    bool no_max_clip = false;
    std::string format = "text";
};

int cmd_validate(Io& io, const ValidateOptions& opt) {
    const std::string content = io.read(opt.path);
    ValidationReport report;
    if (opt.kind == "weak") {
        report = parse_weak_lenient(content).report;
    } else {
        auto parsed = parse_strong_lenient(content);
        NormalizeConfig cfg = opt.norm.config();
        cfg.max_clip_duration = opt.no_max_clip ? std::nullopt : std::optional<double>(opt.max_clip);
        report = std::move(parsed.report);
        report.append(validate_strong(parsed.set, cfg));
        report.sort();
    }
    if (opt.strict) {
        report.promote_warnings();
    }
    io.out << (opt.format == "jsonl" ? render_validation_jsonl(report) : render_validation_text(report));
    return report.has_errors() ? kValidationErrors : kSuccess;
}

struct StatsOptions {
    std::string path;
    std::string kind = "strong";
    std::optional<double> histogram;
    std::string format = "table";
};

int cmd_stats(Io& io, const StatsOptions& opt) {
    const bool jsonl = opt.format == "jsonl";
    if (opt.kind == "weak") {
        const auto set = parse_file(io, opt.path, parse_weak);
        const auto classes = weak_class_stats(set);
        const auto per_clip = classes_per_clip(set);
        if (jsonl) {
            io.out << weak_class_stats_jsonl(classes) << classes_per_clip_jsonl(per_clip);
        } else {
            io.out << "Class-wise clip counts\n" << render_weak_class_stats(classes) << '\n'
                   << "Classes per clip\n" << render_classes_per_clip(per_clip);
        }
        return kSuccess;
    }
    const auto set = parse_file(io, opt.path, parse_strong);
    const auto classes = class_stats(set);
    const auto per_clip = classes_per_clip(set);
    const auto overlap = overlap_stats(set);
    std::vector<DurationHistogram> histograms;
    if (opt.histogram) {
        histograms = duration_histogram(set, *opt.histogram);
    }
    if (jsonl) {
        io.out << class_stats_jsonl(classes) << classes_per_clip_jsonl(per_clip) << overlap_stats_jsonl(overlap)
               << histograms_jsonl(histograms);
    } else {
        io.out << "Class-wise statistics\n" << render_class_stats(classes) << '\n'
               << "Classes per clip\n" << render_classes_per_clip(per_clip) << '\n'
               << "Overlapping events\n" << render_overlap_stats(overlap);
        if (opt.histogram) {
            io.out << '\n' << "Duration distribution (bin width " << *opt.histogram << " s)\n" << render_histograms(histograms);
        }
    }
    return kSuccess;
}

struct DecodeOptions {
    std::string path;
    DecodeConfig decode;
    bool normalize = false;
    NormalizeFlags norm;
    double hop = ActivationMatrix::kDefaultHop;
    std::string output;
};

int cmd_decode(Io& io, const DecodeOptions& opt) {
    opt.decode.validate();
    const auto matrices = parse_file(io, opt.path, [&](std::string_view text) { return parse_activations(text, opt.hop); });
    StrongAnnotationSet decoded;
    for (const auto& m : matrices) {
        auto events = decode(m, opt.decode);
        if (opt.normalize) {
            events = normalize(events, opt.norm.config());
        }
        if (!events.empty()) {
            decoded.add(m.clip(), events);
        }
    }
    const std::string text = serialize_strong(decoded);
    if (opt.output.empty() || opt.output == "-") {
        io.out << text;
    } else {
        std::ofstream file(opt.output, std::ios::binary);
        if (!(file << text)) {
            throw InputError(opt.output + ": cannot write file");
        }
    }
    return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    Io io(in, out, err);

    CLI::App app{"Sound event detection evaluation toolkit"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    EvaluateOptions eval_opt;
    auto* evaluate_cmd = app.add_subcommand("evaluate", "Event-based F1 of a system output against a reference");
    evaluate_cmd->add_option("reference", eval_opt.ref_path, "Reference strong-label file ('-' for stdin)")->required();
    evaluate_cmd->add_option("system", eval_opt.sys_path, "System strong-label file ('-' for stdin)")->required();
    evaluate_cmd->add_option("--onset-collar", eval_opt.eval.onset_collar, "Onset tolerance (s)")->capture_default_str();
    evaluate_cmd->add_option("--offset-collar", eval_opt.eval.offset_collar, "Minimum offset tolerance (s)")->capture_default_str();
    evaluate_cmd->add_option("--offset-pct", eval_opt.eval.offset_length_pct, "Offset tolerance as a fraction of the reference length")
        ->capture_default_str();
    evaluate_cmd->add_option("--classes", eval_opt.classes_path, "File with one class label per line to average over");
    evaluate_cmd->add_flag("--normalize", eval_opt.normalize, "Merge short gaps and drop short events in the system output");
    eval_opt.norm.attach(*evaluate_cmd);
    evaluate_cmd->add_option("--format", eval_opt.format, "Output format")
        ->check(CLI::IsMember({"table", "json", "jsonl"}))
        ->capture_default_str();
    evaluate_cmd->add_option("--jobs", eval_opt.jobs, "Worker threads for matching")->check(CLI::Range(1u, 256u))->capture_default_str();

    ValidateOptions val_opt;
    auto* validate_cmd = app.add_subcommand("validate", "Check an annotation file for format and convention violations");
    validate_cmd->add_option("path", val_opt.path, "Annotation file ('-' for stdin)")->required();
    validate_cmd->add_option("--kind", val_opt.kind, "Annotation kind")
        ->check(CLI::IsMember({"weak", "strong"}))
        ->capture_default_str();
    validate_cmd->add_flag("--strict", val_opt.strict, "Treat warnings as errors");
    val_opt.norm.attach(*validate_cmd);
    validate_cmd->add_option("--max-clip", val_opt.max_clip, "Clip length; events ending later are errors (s)")->capture_default_str();
    validate_cmd->add_flag("--no-max-clip", val_opt.no_max_clip, "Do not check event offsets against the clip length");
    validate_cmd->add_option("--format", val_opt.format, "Output format")
        ->check(CLI::IsMember({"text", "jsonl"}))
        ->capture_default_str();

    StatsOptions stats_opt;
    auto* stats_cmd = app.add_subcommand("stats", "Corpus statistics: class counts, classes per clip, overlap");
    stats_cmd->add_option("path", stats_opt.path, "Annotation file ('-' for stdin)")->required();
    stats_cmd->add_option("--kind", stats_opt.kind, "Annotation kind")
        ->check(CLI::IsMember({"weak", "strong"}))
        ->capture_default_str();
    stats_cmd->add_option("--histogram", stats_opt.histogram, "Also print per-class duration histograms with this bin width (s)")
        ->check(CLI::PositiveNumber);
    stats_cmd->add_option("--format", stats_opt.format, "Output format")
        ->check(CLI::IsMember({"table", "jsonl"}))
        ->capture_default_str();

    DecodeOptions dec_opt;
    auto* decode_cmd = app.add_subcommand("decode", "Turn frame activations into a strong-label file");
    decode_cmd->add_option("activations", dec_opt.path, "Activation file ('-' for stdin)")->required();
    decode_cmd->add_option("--threshold", dec_opt.decode.threshold, "Activation threshold (inclusive)")->capture_default_str();
    decode_cmd->add_option("--median", dec_opt.decode.median_window, "Median filter length in frames (odd)")->capture_default_str();
    decode_cmd->add_flag("--normalize", dec_opt.normalize, "Merge short gaps and drop short events after decoding");
    dec_opt.norm.attach(*decode_cmd);
    decode_cmd->add_option("--hop", dec_opt.hop, "Frame hop used when the file header says just 'hop' (s)")->capture_default_str();
    decode_cmd->add_option("-o,--output", dec_opt.output, "Write to this file instead of stdout");

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kUsageError;
    }

    try {
        if (evaluate_cmd->parsed()) {
            return cmd_evaluate(io, eval_opt);
        }
        if (validate_cmd->parsed()) {
            return cmd_validate(io, val_opt);
        }
        if (stats_cmd->parsed()) {
            return cmd_stats(io, stats_opt);
        }
        return cmd_decode(io, dec_opt);
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
    }
    return kUsageError;
}

}  // namespace sedkit::cli
