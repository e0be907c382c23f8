#include "gazekit/commands.hpp"

#include <algorithm>
#include <iostream>
#include <map>
#include <set>

#include "gazekit/caption.hpp"
#include "gazekit/csv.hpp"
#include "gazekit/error.hpp"
#include "gazekit/gradcheck.hpp"
#include "gazekit/map_io.hpp"
#include "gazekit/radar.hpp"
#include "gazekit/saliency_metrics.hpp"
#include "gazekit/tables.hpp"
#include "gazekit/text_metrics.hpp"

namespace fs = std::filesystem;

namespace gazekit {

namespace {

constexpr int kTableDigits = 9;

std::vector<fs::path> list_map_files(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw Error(ErrorCode::IoError, "not a directory: '" + dir.string() + "'");
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && is_map_file(entry.path())) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end(),
              [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });
    return files;
}

std::map<std::string, fs::path> by_name(const std::vector<fs::path>& files) {
    std::map<std::string, fs::path> m;
    for (const auto& f : files) m.emplace(f.filename().string(), f);
    return m;
}

// Lines of a text file without terminators; a trailing newline does not add an empty line.
std::vector<std::string> read_lines(const fs::path& path) {
    const auto text = read_text_file(path);
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string::npos) end = text.size();
        std::string line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
        start = end + 1;
    }
    return lines;
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const auto tab = line.find('\t', start);
        parts.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
        if (tab == std::string::npos) break;
        start = tab + 1;
    }
    return parts;
}

template <typename F>
MetricCell metric_cell(F&& compute) {
    try {
        return {compute(), {}};
    } catch (const Error& e) {
        return {std::nullopt, std::string(error_name(e.code()))};
    }
}

}  // namespace

int cmd_evaluate(const EvaluateOptions& opts, std::ostream& log, std::ostream& err) {
    std::map<std::string, fs::path> preds, gts, fixes;
    try {
        preds = by_name(list_map_files(opts.pred_dir));
        gts = by_name(list_map_files(opts.gt_dir));
        if (opts.fix_dir) fixes = by_name(list_map_files(*opts.fix_dir));
    } catch (const Error& e) {
        err << e.what() << "\n";
        return kExitInputError;
    }

    std::set<std::string> names;
    for (const auto& [n, p] : preds) names.insert(n);
    for (const auto& [n, p] : gts) names.insert(n);
    bool unpaired = false;
    for (const auto& n : names) {
        if (!preds.count(n)) err << "unpaired: " << n << " missing from prediction directory\n", unpaired = true;
        if (!gts.count(n)) err << "unpaired: " << n << " missing from ground-truth directory\n", unpaired = true;
        if (opts.fix_dir && !fixes.count(n)) err << "unpaired: " << n << " missing from fixation directory\n", unpaired = true;
    }
    if (unpaired) return kExitInputError;
    if (!opts.fix_dir) log << "AUC-J, AUC-B and NSS skipped: no fixation directory given\n";

    std::vector<MetricsRow> rows;
    bool unreadable = false;
    for (const auto& n : names) {
        std::optional<GazeMap> pred, gt;
        std::optional<FixationMap> fix;
        try {
            pred = read_gaze_map(preds.at(n));
            gt = read_gaze_map(gts.at(n));
            if (opts.fix_dir) fix = read_fixation_map(fixes.at(n));
        } catch (const Error& e) {
            err << "unreadable map for " << n << ": " << e.what() << "\n";
            unreadable = true;
            continue;
        }
        MetricsRow row;
        row.id = n;
        row.cells[0] = metric_cell([&] { return cc(*pred, *gt); });
        row.cells[1] = metric_cell([&] { return kl_div(*gt, *pred); });
        row.cells[2] = metric_cell([&] { return sim(*pred, *gt); });
        if (fix) {
            row.cells[3] = metric_cell([&] { return auc_judd(*pred, *fix); });
            row.cells[4] = metric_cell([&] { return auc_borji(*pred, *fix, opts.n_splits, opts.seed); });
            row.cells[5] = metric_cell([&] { return nss(*pred, *fix); });
        } else {
            for (std::size_t k = 3; k < kMetricCount; ++k) row.cells[k].note = "skipped";
        }
        rows.push_back(std::move(row));
    }
    if (unreadable) return kExitInputError;

    try {
        write_text_file(opts.out, format_metrics_table(rows));
    } catch (const std::exception& e) {
        err << e.what() << "\n";
        return kExitInputError;
    }
    log << "evaluated " << rows.size() << " map pairs -> " << opts.out.string() << "\n";
    return kExitOk;
}

int cmd_curate(const CurateOptions& opts, std::ostream& log, std::ostream& err) {
    try {
        opts.params.validate();
    } catch (const Error& e) {
        err << e.what() << "\n";
        return kExitInputError;
    }
    if (!fs::is_directory(opts.input_dir)) {
        err << "not a directory: '" << opts.input_dir.string() << "'\n";
        return kExitInputError;
    }
    std::vector<fs::path> video_dirs;
    for (const auto& entry : fs::directory_iterator(opts.input_dir)) {
        if (entry.is_directory()) video_dirs.push_back(entry.path());
    }
    std::sort(video_dirs.begin(), video_dirs.end(),
              [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });

    bool skipped = false;
    std::vector<GazeSequence> sequences;
    for (const auto& dir : video_dirs) {
        GazeSequence seq;
        seq.video_id = dir.filename().string();
        try {
            const auto files = list_map_files(dir);
            if (files.empty()) throw Error(ErrorCode::TooShort, "no map files");
            for (const auto& f : files) {
                seq.maps.push_back(read_gaze_map(f));
                seq.frame_paths.push_back((opts.input_dir / seq.video_id / f.filename()).generic_string());
                if (seq.maps.back().width() != seq.maps.front().width() ||
                    seq.maps.back().height() != seq.maps.front().height()) {
                    throw Error(ErrorCode::ShapeMismatch, "frame " + f.filename().string() + " changes grid size");
                }
            }
        } catch (const Error& e) {
            err << "skipping video '" << seq.video_id << "': " << e.what() << "\n";
            skipped = true;
            continue;
        }
        sequences.push_back(std::move(seq));
    }

    const auto manifest = curate_corpus(sequences, opts.params);
    try {
        write_text_file(opts.out, format_manifest(manifest));
    } catch (const std::exception& e) {
        err << e.what() << "\n";
        return kExitInputError;
    }
    for (const auto& v : manifest.videos) {
        log << v.video_id << ": frames=" << v.frames << " pairs=" << v.pairs << "\n";
    }
    log << "total pairs: " << manifest.total() << "\n";
    return skipped ? kExitInputError : kExitOk;
}

int cmd_caption_eval(const CaptionEvalOptions& opts, std::ostream& out, std::ostream& err) {
    std::vector<std::string> cands, refs, corpus_lines;
    try {
        cands = read_lines(opts.candidates);
        refs = read_lines(opts.references);
        corpus_lines = opts.corpus ? read_lines(*opts.corpus) : refs;
    } catch (const Error& e) {
        err << e.what() << "\n";
        return kExitInputError;
    }
    if (cands.size() != refs.size()) {
        err << "line count mismatch: " << cands.size() << " candidates vs " << refs.size() << " references\n";
        return kExitInputError;
    }

    std::vector<CaptionPair> pairs;
    for (std::size_t i = 0; i < cands.size(); ++i) pairs.push_back({cands[i], split_tabs(refs[i])});
    std::vector<std::vector<std::string>> corpus;
    for (const auto& line : corpus_lines) corpus.push_back(split_tabs(line));

    CaptionScoreReport report;
    try {
        report = score_captions(pairs, corpus, opts.per_field);
    } catch (const Error& e) {
        err << e.what() << "\n";
        return kExitInputError;
    }

    CsvTable t;
    t.header = {"row", "bleu", "rouge_l", "cider_base", "error"};
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        const auto& r = report.rows[i];
        if (r.ok()) {
            t.rows.push_back({std::to_string(i + 1), format_number(r.score.bleu, kTableDigits),
                              format_number(r.score.rouge_l, kTableDigits),
                              format_number(r.score.cider, kTableDigits), ""});
        } else {
            t.rows.push_back({std::to_string(i + 1), "NA", "NA", "NA", r.error});
            err << "row " << i + 1 << ": " << r.error << "\n";
        }
    }
    if (report.scored > 0) {
        t.rows.push_back({"mean", format_number(report.mean.bleu, kTableDigits),
                          format_number(report.mean.rouge_l, kTableDigits),
                          format_number(report.mean.cider, kTableDigits), ""});
    } else {
        t.rows.push_back({"mean", "NA", "NA", "NA", ""});
    }
    const auto text = format_csv_table(t);
    if (opts.out) {
        try {
            write_text_file(*opts.out, text);
        } catch (const std::exception& e) {
            err << e.what() << "\n";
            return kExitInputError;
        }
    } else {
        out << text;
    }
    return kExitOk;
}

int cmd_grad_check(const GradCheckOptions& opts, std::ostream& out) {
    const auto results = run_gradient_suite(opts.seed, opts.trials, opts.corrupt);
    bool all = true;
    for (const auto& r : results) {
        out << r.name << " trials=" << r.trials << " max_rel_err=" << format_number(r.max_rel_error, 4) << " "
            << (r.passed() ? "PASS" : "FAIL") << "\n";
        all = all && r.passed();
    }
    out << "overall " << (all ? "PASS" : "FAIL") << "\n";
    return all ? kExitOk : kExitCheckFailed;
}

int cmd_fit_demo(const FitDemoOptions& opts, std::ostream& out, std::ostream& err) {
    std::vector<FitStep> trajectory;
    try {
        GazeMap gt = GazeMap::uniform(1, 1);
        if (opts.target_map) {
            gt = read_gaze_map(*opts.target_map);
        } else if (opts.target == "delta") {
            gt = GazeMap::delta(opts.grid_size, opts.grid_size, opts.grid_size / 2, opts.grid_size / 2);
        } else if (opts.target == "uniform") {
            gt = GazeMap::uniform(opts.grid_size, opts.grid_size);
        } else {
            throw Error(ErrorCode::InvalidArgument, "unknown target '" + opts.target + "'");
        }
        trajectory = fit_gaze_demo(gt, opts.cfg, opts.steps, opts.lr, opts.hinge);
    } catch (const Error& e) {
        err << e.what() << "\n";
        return kExitInputError;
    }

    CsvTable t;
    t.header = {"step", "loss", "entropy"};
    for (const auto& s : trajectory) {
        t.rows.push_back({std::to_string(s.step), format_number(s.loss, 17), format_number(s.entropy, 17)});
    }
    const auto text = format_csv_table(t);
    if (opts.out) {
        try {
            write_text_file(*opts.out, text);
        } catch (const std::exception& e) {
            err << e.what() << "\n";
            return kExitInputError;
        }
        out << "final step " << trajectory.back().step << ": loss=" << format_number(trajectory.back().loss, 9)
            << " kl=" << format_number(trajectory.back().kl, 9)
            << " entropy=" << format_number(trajectory.back().entropy, 9) << "\n";
    } else {
        out << text;
    }
    return kExitOk;
}

int cmd_report(const ReportOptions& opts, std::ostream& log, std::ostream& err) {
    if (opts.tables.size() < 2) {
        err << "report needs at least two metrics tables\n";
        return kExitInputError;
    }
    if (!opts.labels.empty() && opts.labels.size() != opts.tables.size()) {
        err << "got " << opts.labels.size() << " labels for " << opts.tables.size() << " tables\n";
        return kExitInputError;
    }
    std::vector<RadarModel> models;
    for (std::size_t i = 0; i < opts.tables.size(); ++i) {
        RadarModel m;
        m.label = opts.labels.empty() ? opts.tables[i].stem().string() : opts.labels[i];
        try {
            const auto means = read_metrics_means(read_text_file(opts.tables[i]));
            for (std::size_t k = 0; k < kMetricCount; ++k) {
                if (!means[k]) {
                    throw Error(ErrorCode::ParseError,
                                "no mean value for '" + std::string(kMetricColumns[k]) + "'");
                }
                m.metrics[k] = *means[k];
            }
        } catch (const Error& e) {
            err << opts.tables[i].string() << ": " << e.what() << "\n";
            return kExitInputError;
        }
        models.push_back(std::move(m));
    }
    const auto layout = radar_layout(models);
    for (const auto& axis : layout.degenerate_axes) {
        err << "DegenerateRange on axis " << axis << ": all models equal, drawn at 0.5\n";
    }
    try {
        write_text_file(opts.out, render_radar_svg(models, layout));
    } catch (const std::exception& e) {
        err << e.what() << "\n";
        return kExitInputError;
    }
    log << "wrote radar chart for " << models.size() << " models -> " << opts.out.string() << "\n";
    return kExitOk;
}

int cmd_review(const ReviewOptions& opts, std::istream& in, std::ostream& out, std::ostream& err) {
    CsvTable table;
    try {
        const bool resume = fs::exists(opts.decisions_out);
        table = parse_csv_table(read_text_file(resume ? opts.decisions_out : opts.manifest));
        if (resume) out << "resuming from " << opts.decisions_out.string() << "\n";
    } catch (const Error& e) {
        err << e.what() << "\n";
        return kExitInputError;
    }
    const auto caption_col = table.column("caption");
    if (caption_col == std::string::npos) {
        err << "manifest has no caption column\n";
        return kExitInputError;
    }
    auto decision_col = table.column("decision");
    if (decision_col == std::string::npos) {
        table.header.emplace_back("decision");
        for (auto& r : table.rows) r.emplace_back();
        decision_col = table.header.size() - 1;
    }
    const auto cell = [&](const CsvRow& r, std::string_view name) {
        const auto c = table.column(name);
        return c == std::string::npos ? std::string("?") : r[c];
    };
    const auto save = [&] { write_text_file(opts.decisions_out, format_csv_table(table)); };

    // Reads lines until a caption parses ("q" quits, "r" rejects when allowed).
    enum class EditOutcome { Edited, Rejected, Quit };
    const auto read_caption = [&](CsvRow& row) {
        std::string line;
        while (true) {
            out << "new caption> " << std::flush;
            if (!std::getline(in, line) || line == "q") return EditOutcome::Quit;
            if (line == "r") return EditOutcome::Rejected;
            try {
                row[caption_col] = serialize_caption(parse_caption(line));
                return EditOutcome::Edited;
            } catch (const CaptionError& e) {
                out << "invalid caption: " << e.summary() << "\n";
            }
        }
    };

    std::size_t decided_now = 0;
    bool quit = false;
    for (std::size_t i = 0; i < table.rows.size() && !quit; ++i) {
        auto& row = table.rows[i];
        if (!row[decision_col].empty()) continue;
        out << "[" << i + 1 << "/" << table.rows.size() << "] video=" << cell(row, "video_id")
            << " anchor=" << cell(row, "anchor") << " target=" << cell(row, "target")
            << " pair_kl=" << cell(row, "pair_kl") << "\n";
        out << "caption: " << row[caption_col] << "\n";

        std::optional<std::string> problem;
        try {
            (void)parse_caption(row[caption_col]);
        } catch (const CaptionError& e) {
            problem = e.summary();
        }

        std::string decision;
        if (problem) {
            out << "caption invalid (" << *problem << "); edit required, 'r' rejects, 'q' quits\n";
            const auto outcome = read_caption(row);
            if (outcome == EditOutcome::Quit) break;
            decision = outcome == EditOutcome::Edited ? "edited" : "reject";
        } else {
            while (decision.empty() && !quit) {
                out << "(a)ccept (r)eject (e)dit (q)uit> " << std::flush;
                std::string answer;
                if (!std::getline(in, answer) || answer == "q") {
                    quit = true;
                } else if (answer == "a") {
                    decision = "accept";
                } else if (answer == "r") {
                    decision = "reject";
                } else if (answer == "e") {
                    const auto outcome = read_caption(row);
                    if (outcome == EditOutcome::Quit) quit = true;
                    else decision = outcome == EditOutcome::Edited ? "edited" : "reject";
                }
            }
            if (quit) break;
        }
        row[decision_col] = decision;
        ++decided_now;
        try {
            save();
        } catch (const std::exception& e) {
            err << e.what() << "\n";
            return kExitInputError;
        }
    }

    try {
        save();
    } catch (const std::exception& e) {
        err << e.what() << "\n";
        return kExitInputError;
    }
    const auto decided = static_cast<std::size_t>(std::count_if(
        table.rows.begin(), table.rows.end(), [&](const CsvRow& r) { return !r[decision_col].empty(); }));
    out << "decided " << decided_now << " rows this session; " << decided << "/" << table.rows.size()
        << " decided in total\n";
    return kExitOk;
}

int cmd_validate_captions(const ValidateCaptionsOptions& opts, std::ostream& out, std::ostream& err) {
    CsvTable table;
    try {
        table = parse_csv_table(read_text_file(opts.manifest));
    } catch (const Error& e) {
        err << e.what() << "\n";
        return kExitInputError;
    }
    const auto col = table.column("caption");
    if (col == std::string::npos) {
        err << "manifest has no caption column\n";
        return kExitInputError;
    }
    std::vector<std::string> captions;
    for (const auto& r : table.rows) captions.push_back(r[col]);
    const auto report = validate_manifest_captions(captions);
    for (const auto& r : report.rows) {
        if (!r.valid) out << "row " << r.row + 1 << ": " << r.error << "\n";
    }
    out << "valid=" << report.valid << " invalid=" << report.invalid << " total=" << report.total() << "\n";
    return report.invalid == 0 ? kExitOk : kExitCheckFailed;
}

}  // namespace gazekit
