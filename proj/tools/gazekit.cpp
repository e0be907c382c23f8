#include <iostream>

#include <CLI11.hpp>

#include "gazekit/commands.hpp"

int main(int argc, char** argv) {
    using namespace gazekit;

    CLI::App app{"gazekit: gaze-map metrics, objectives, and frame-pair curation"};
    app.require_subcommand(1);
    int status = kExitOk;

    EvaluateOptions eval;
    std::string fix_dir;
    auto* evaluate = app.add_subcommand("evaluate", "Score predicted maps against ground truth");
    evaluate->add_option("--pred-dir", eval.pred_dir, "Directory of predicted maps")->required();
    evaluate->add_option("--gt-dir", eval.gt_dir, "Directory of ground-truth maps")->required();
    evaluate->add_option("--fix-dir", fix_dir, "Directory of fixation maps (enables AUC and NSS)");
    evaluate->add_option("--out", eval.out, "Metrics table CSV")->required();
    evaluate->add_option("--seed", eval.seed, "Seed for AUC-Borji negative sampling")->capture_default_str();
    evaluate->add_option("--n-splits", eval.n_splits, "AUC-Borji resampling rounds")->capture_default_str();
    evaluate->callback([&] {
        if (!fix_dir.empty()) eval.fix_dir = fix_dir;
        status = cmd_evaluate(eval, std::cout, std::cerr);
    });

    CurateOptions cur;
    auto* curate = app.add_subcommand("curate", "Select KL-peak frame pairs from per-video map sequences");
    curate->add_option("--input-dir", cur.input_dir, "One subdirectory of frame maps per video")->required();
    curate->add_option("--out", cur.out, "Manifest CSV")->required();
    curate->add_option("--delta-min", cur.params.delta_min)->capture_default_str();
    curate->add_option("--delta-max", cur.params.delta_max)->capture_default_str();
    curate->add_option("--min-frames", cur.params.min_frames)->capture_default_str();
    curate->add_option("--top-k", cur.params.top_k)->capture_default_str();
    curate->add_option("--peak-floor", cur.params.peak_floor)->capture_default_str();
    curate->callback([&] { status = cmd_curate(cur, std::cout, std::cerr); });

    CaptionEvalOptions cap;
    std::string corpus, cap_out;
    auto* caption_eval = app.add_subcommand("caption-eval", "BLEU, ROUGE-L and CIDEr for line-aligned captions");
    caption_eval->add_option("--candidates", cap.candidates)->required();
    caption_eval->add_option("--references", cap.references, "TAB separates multiple references")->required();
    caption_eval->add_option("--corpus", corpus, "Reference sets for CIDEr document frequencies");
    caption_eval->add_option("--out", cap_out, "Score CSV (stdout when omitted)");
    caption_eval->add_flag("--per-field", cap.per_field, "Score each structured caption field separately");
    caption_eval->callback([&] {
        if (!corpus.empty()) cap.corpus = corpus;
        if (!cap_out.empty()) cap.out = cap_out;
        status = cmd_caption_eval(cap, std::cout, std::cerr);
    });

    GradCheckOptions gc;
    auto* grad_check = app.add_subcommand("grad-check", "Finite-difference checks of every analytic gradient");
    grad_check->add_option("--seed", gc.seed)->capture_default_str();
    grad_check->add_option("--trials", gc.trials)->capture_default_str();
    grad_check->add_flag("--corrupt", gc.corrupt)->group("");
    grad_check->callback([&] { status = cmd_grad_check(gc, std::cout); });

    FitDemoOptions fit;
    std::string target_map, fit_out;
    auto* fit_demo = app.add_subcommand("fit-demo", "Gradient descent of free logits onto a target map");
    fit_demo->add_option("--grid-size", fit.grid_size)->capture_default_str();
    fit_demo->add_option("--steps", fit.steps)->capture_default_str();
    fit_demo->add_option("--lr", fit.lr)->capture_default_str();
    fit_demo->add_flag("--hinge", fit.hinge, "Use the blur-gap objective instead of plain KL");
    fit_demo->add_option("--target", fit.target)->check(CLI::IsMember({"delta", "uniform"}))->capture_default_str();
    fit_demo->add_option("--target-map", target_map, "Map file used as the target instead of --target");
    fit_demo->add_option("--lambda", fit.cfg.lambda)->capture_default_str();
    fit_demo->add_option("--epsilon", fit.cfg.epsilon)->capture_default_str();
    fit_demo->add_option("--sigma", fit.cfg.sigma)->capture_default_str();
    fit_demo->add_option("--out", fit_out, "Trajectory CSV (stdout when omitted)");
    fit_demo->callback([&] {
        if (!target_map.empty()) fit.target_map = target_map;
        if (!fit_out.empty()) fit.out = fit_out;
        status = cmd_fit_demo(fit, std::cout, std::cerr);
    });

    ReportOptions rep;
    auto* report = app.add_subcommand("report", "Radar SVG comparing the mean rows of metrics tables");
    report->add_option("--table", rep.tables, "Metrics table CSV (repeat for each model)")->required();
    report->add_option("--label", rep.labels, "Legend label per table, in the same order");
    report->add_option("--out", rep.out, "SVG output")->required();
    report->callback([&] { status = cmd_report(rep, std::cout, std::cerr); });

    ReviewOptions rev;
    auto* review = app.add_subcommand("review", "Accept, reject or edit manifest captions row by row");
    review->add_option("--manifest", rev.manifest)->required();
    review->add_option("--decisions-out", rev.decisions_out)->required();
    review->callback([&] { status = cmd_review(rev, std::cin, std::cout, std::cerr); });

    ValidateCaptionsOptions val;
    auto* validate = app.add_subcommand("validate-captions", "Check every manifest caption parses");
    validate->add_option("--manifest", val.manifest)->required();
    validate->callback([&] { status = cmd_validate_captions(val, std::cout, std::cerr); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInputError;
    }
    return status;
}
