#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gazekit/alignment.hpp"
#include "gazekit/caption.hpp"
#include "gazekit/curation.hpp"
#include "gazekit/error.hpp"
#include "gazekit/gradcheck.hpp"
#include "gazekit/grid.hpp"
#include "gazekit/objectives.hpp"
#include "gazekit/saliency_metrics.hpp"
#include "gazekit/text_metrics.hpp"

namespace py = pybind11;
using namespace gazekit;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Grid to_grid(const Array& a) {
    if (a.ndim() != 2) throw Error(ErrorCode::InvalidGrid, "expected a 2-D array");
    const auto h = static_cast<std::size_t>(a.shape(0));
    const auto w = static_cast<std::size_t>(a.shape(1));
    return Grid(w, h, std::vector<double>(a.data(), a.data() + w * h));
}

Array to_array(const Grid& g) {
    Array out({g.height, g.width});
    std::copy(g.values.begin(), g.values.end(), out.mutable_data());
    return out;
}

GazeMap to_map(const Array& a) { return GazeMap::from_values(to_grid(a)); }
FixationMap to_fix(const Array& a) { return FixationMap::from_grid(to_grid(a)); }

std::vector<Vector> to_rows(const Array& a) {
    if (a.ndim() != 2) throw Error(ErrorCode::ShapeMismatch, "expected a 2-D array");
    const auto rows = static_cast<std::size_t>(a.shape(0));
    const auto dim = static_cast<std::size_t>(a.shape(1));
    std::vector<Vector> out(rows);
    for (std::size_t i = 0; i < rows; ++i) out[i].assign(a.data() + i * dim, a.data() + (i + 1) * dim);
    return out;
}

Array from_rows(const std::vector<Vector>& rows) {
    const std::size_t dim = rows.empty() ? 0 : rows.front().size();
    Array out({rows.size(), dim});
    for (std::size_t i = 0; i < rows.size(); ++i) std::copy(rows[i].begin(), rows[i].end(), out.mutable_data() + i * dim);
    return out;
}

GazeLossConfig make_cfg(double lambda, double epsilon, double sigma) { return {lambda, epsilon, sigma}; }

}  // namespace

PYBIND11_MODULE(_gazekit, m) {
    m.doc() = "Gaze-map metrics, objectives and frame-pair curation";

    static py::exception<Error> error_type(m, "GazekitError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object exc = py::reinterpret_borrow<py::object>(error_type.ptr())(std::string(e.what()));
            exc.attr("code") = std::string(error_name(e.code()));
            PyErr_SetObject(error_type.ptr(), exc.ptr());
        }
    });

    m.def("normalize_to_simplex", [](const Array& a) { return to_array(normalize_to_simplex(to_grid(a)).grid()); });
    m.def("spatial_softmax", [](const Array& a) { return to_array(spatial_softmax(LogitGrid(to_grid(a))).grid()); });
    m.def("gaussian_blur", [](const Array& a, double sigma) { return to_array(gaussian_blur(to_map(a), sigma).grid()); },
          py::arg("map"), py::arg("sigma") = 1.0);
    m.def("resample_area",
          [](const Array& a, std::size_t w, std::size_t h) { return to_array(resample_area(to_map(a), w, h).grid()); },
          py::arg("map"), py::arg("out_width"), py::arg("out_height"));
    m.def("entropy", [](const Array& a) { return entropy(to_map(a)); });

    m.def("cc", [](const Array& p, const Array& g) { return cc(to_grid(p), to_grid(g)); });
    m.def("kl_div", [](const Array& g, const Array& p, double floor) { return kl_div(to_map(g), to_map(p), floor); },
          py::arg("gt"), py::arg("pred"), py::arg("floor") = kKlFloor);
    m.def("sim", [](const Array& p, const Array& g) { return sim(to_map(p), to_map(g)); });
    m.def("nss", [](const Array& p, const Array& f) { return nss(to_grid(p), to_fix(f)); });
    m.def("auc_judd", [](const Array& p, const Array& f) { return auc_judd(to_grid(p), to_fix(f)); });
    m.def("auc_borji",
          [](const Array& p, const Array& f, std::size_t n, std::uint64_t seed) {
              return auc_borji(to_grid(p), to_fix(f), n, seed);
          },
          py::arg("pred"), py::arg("fix"), py::arg("n_splits") = 100, py::arg("seed") = 0);
    m.def("radar_normalize", [](const std::vector<double>& s, bool invert) { return radar_normalize(s, invert); },
          py::arg("scores"), py::arg("invert") = false);

    m.def("loss_gaze",
          [](const Array& gt, const Array& logits, double lambda, double epsilon, double sigma) {
              const auto r = loss_gaze(to_map(gt), LogitGrid(to_grid(logits)), make_cfg(lambda, epsilon, sigma));
              return py::dict(py::arg("total") = r.total, py::arg("kl") = r.kl, py::arg("blurred_kl") = r.blurred_kl,
                              py::arg("hinge") = r.hinge);
          },
          py::arg("gt"), py::arg("logits"), py::arg("lam") = 0.3, py::arg("epsilon") = 0.05, py::arg("sigma") = 1.0);
    m.def("grad_loss_gaze",
          [](const Array& gt, const Array& logits, double lambda, double epsilon, double sigma) {
              return to_array(grad_loss_gaze(to_map(gt), LogitGrid(to_grid(logits)), make_cfg(lambda, epsilon, sigma)));
          },
          py::arg("gt"), py::arg("logits"), py::arg("lam") = 0.3, py::arg("epsilon") = 0.05, py::arg("sigma") = 1.0);
    m.def("loss_caption",
          [](const Array& step_logits, const std::vector<std::size_t>& tokens) {
              const auto rows = to_rows(step_logits);
              return loss_caption(rows, TokenSequence(tokens, rows.empty() ? 0 : rows.front().size()));
          });
    m.def("grad_loss_caption",
          [](const Array& step_logits, const std::vector<std::size_t>& tokens) {
              const auto rows = to_rows(step_logits);
              return from_rows(grad_loss_caption(rows, TokenSequence(tokens, rows.empty() ? 0 : rows.front().size())));
          });
    m.def("total_loss",
          [](double g, double c, double a, double wg, double wc, double wa) { return total_loss(g, c, a, {wg, wc, wa}); },
          py::arg("gaze"), py::arg("caption"), py::arg("align"), py::arg("w_gaze") = 1.0, py::arg("w_caption") = 1.0,
          py::arg("w_align") = 0.2);
    m.def("fit_gaze_demo",
          [](const Array& gt, std::size_t steps, double lr, bool hinge) {
              py::list out;
              for (const auto& s : fit_gaze_demo(to_map(gt), GazeLossConfig{}, steps, lr, hinge)) {
                  out.append(py::make_tuple(s.step, s.loss, s.entropy));
              }
              return out;
          },
          py::arg("gt"), py::arg("steps"), py::arg("lr") = 1.0, py::arg("hinge") = false);

    m.def("cosine_sim", [](const std::vector<double>& a, const std::vector<double>& b) { return cosine_sim(a, b); });
    m.def("info_nce",
          [](const Array& vis, const Array& txt, double tau, bool symmetric) {
              return info_nce(EmbeddingBatch(to_rows(vis)), EmbeddingBatch(to_rows(txt)), tau, symmetric);
          },
          py::arg("vis"), py::arg("txt"), py::arg("tau") = kDefaultTemperature, py::arg("symmetric") = false);
    m.def("grad_info_nce",
          [](const Array& vis, const Array& txt, double tau, bool symmetric) {
              const auto g = grad_info_nce(EmbeddingBatch(to_rows(vis)), EmbeddingBatch(to_rows(txt)), tau, symmetric);
              return py::make_tuple(from_rows(g.vis), from_rows(g.txt));
          },
          py::arg("vis"), py::arg("txt"), py::arg("tau") = kDefaultTemperature, py::arg("symmetric") = false);

    m.def("parse_caption", [](std::string_view text) {
        const auto c = parse_caption(text);
        return py::dict(py::arg("scene") = c.scene(), py::arg("current") = c.current(), py::arg("next") = c.next(),
                        py::arg("why") = c.why());
    });
    m.def("serialize_caption", [](std::string scene, std::string current, std::string next, std::string why) {
        return serialize_caption(StructuredCaption(std::move(scene), std::move(current), std::move(next), std::move(why)));
    });

    m.def("tokenize", [](std::string_view text) { return tokenize(text).tokens; });
    m.def("bleu",
          [](std::string_view cand, const std::vector<std::string>& refs, std::size_t max_n) {
              std::vector<TokenizedText> r;
              for (const auto& s : refs) r.push_back(tokenize(s));
              return bleu(tokenize(cand), r, max_n);
          },
          py::arg("candidate"), py::arg("references"), py::arg("max_n") = 4);
    m.def("rouge_l", [](std::string_view cand, std::string_view ref) { return rouge_l(tokenize(cand), tokenize(ref)); });

    m.def("curate",
          [](const std::vector<std::vector<Array>>& videos, std::size_t delta_min, std::size_t delta_max,
             std::size_t min_frames, std::size_t top_k, double peak_floor) {
              std::vector<GazeSequence> seqs;
              for (std::size_t v = 0; v < videos.size(); ++v) {
                  GazeSequence s;
                  s.video_id = std::to_string(v);
                  for (const auto& a : videos[v]) s.maps.push_back(to_map(a));
                  seqs.push_back(std::move(s));
              }
              const CurationParams params{delta_min, delta_max, min_frames, top_k, peak_floor};
              params.validate();
              py::list out;
              for (const auto& r : curate_corpus(seqs, params).rows) {
                  out.append(py::dict(py::arg("video") = std::stoul(r.video_id), py::arg("anchor") = r.anchor,
                                      py::arg("target") = r.target, py::arg("pair_kl") = r.pair_kl));
              }
              return out;
          },
          py::arg("videos"), py::arg("delta_min") = 3, py::arg("delta_max") = 18, py::arg("min_frames") = 50,
          py::arg("top_k") = 2, py::arg("peak_floor") = 0.0);

    m.def("gradient_check",
          [](std::uint64_t seed, std::size_t trials) {
              py::dict out;
              for (const auto& r : run_gradient_suite(seed, trials)) out[py::str(r.name)] = r.max_rel_error;
              return out;
          },
          py::arg("seed") = 0, py::arg("trials") = 10);
}
