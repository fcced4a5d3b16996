/* Copyright 2026 The ELSR Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "elsr/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "elsr/dataset.hpp"
#include "elsr/error.hpp"
#include "elsr/image.hpp"
#include "elsr/metrics.hpp"
#include "elsr/model.hpp"
#include "elsr/ops.hpp"
#include "elsr/resize.hpp"
#include "elsr/stage_config.hpp"
#include "elsr/train.hpp"
#include "elsr/weights.hpp"

namespace elsr {

namespace fs = std::filesystem;

namespace {

// Swallows output when quiet is set.
class Progress {
 public:
  Progress(std::ostream& out, bool quiet) : out_(out), quiet_(quiet) {}
  template <typename T>
  Progress& operator<<(const T& v) {
    if (!quiet_) out_ << v;
    return *this;
  }

 private:
  std::ostream& out_;
  bool quiet_;
};

std::string join_dims(const std::vector<std::int64_t>& dims) {
  std::string s = "[";
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(dims[i]);
  }
  return s + "]";
}

Model model_from_file(const fs::path& path) {
  const WeightArchive a = read_archive(path);
  return from_archive(a, infer_config(a), false);
}

Tensor random_probe(std::uint64_t seed, Shape s) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> d(0.0f, 1.0f);
  Tensor t(s);
  for (float& v : t.data()) v = d(rng);
  return t;
}

ImageBuffer run_model(const Model& m, const ImageBuffer& lr) {
  return from_tensor(m.forward(to_tensor(lr)));
}

}  // namespace

int cmd_prepare_data(const PrepareOptions& o, std::ostream& out,
                     std::ostream& err) {
  Progress log(out, o.quiet);
  const PrepareReport r = prepare_lr_frames(o.hr_root, o.out_root, o.scale);
  for (const std::string& f : r.failures) err << "error: " << f << "\n";
  log << "prepare-data x" << o.scale << ": " << r.written << " written, "
      << r.unchanged << " unchanged, " << r.failures.size() << " failed\n";
  return r.failures.empty() ? 0 : 1;
}

fs::path default_init_path(const fs::path& out_weights, int stage) {
  return out_weights.parent_path() /
         ("stage" + std::to_string(stage - 1) + ".elsr");
}

int cmd_train(const TrainOptions& o, std::ostream& out, std::ostream& err) {
  Progress log(out, o.quiet);
  const auto stages = load_stage_configs(o.config_path);
  auto it = std::find_if(stages.begin(), stages.end(),
                         [&](const TrainStageConfig& s) { return s.stage == o.stage; });
  if (it == stages.end()) {
    throw Error(o.config_path.string() + " has no [stage." +
                std::to_string(o.stage) + "] section");
  }
  TrainStageConfig stage = *it;
  log << "schedule from " << o.config_path.string() << ":\n";
  for (const TrainStageConfig& s : stages) {
    log << "  " << format_stage_config(s) << "\n";
  }
  if (o.iters_override) stage = with_iterations(stage, *o.iters_override);
  if (o.batch_override) stage.batch_size = *o.batch_override;
  if (o.patch_override) stage.patch_size_hr = *o.patch_override;
  if (o.lr_override) stage.lr_init = *o.lr_override;
  stage.validate();
  log << "running " << format_stage_config(stage) << "\n";
  log << "  lr " << lr_at(stage, 0) << " from iter 0";
  for (std::int64_t m : stage.lr_milestones) {
    log << ", " << lr_at(stage, m) << " from iter " << m;
  }
  log << "\n";

  ModelConfig cfg;
  cfg.scale = stage.scale;
  cfg.nf = o.nf;
  Model model = build_model(cfg, o.seed);
  if (stage.init_from != InitFrom::Scratch) {
    const fs::path init = o.init_weights.value_or(default_init_path(o.out_weights, stage.stage));
    if (!fs::exists(init)) {
      throw Error("stage " + roman_numeral(stage.stage) + " (init " +
                  to_string(stage.init_from) + ") needs weights at " +
                  init.string() + "; train the previous stage or pass --init");
    }
    WeightArchive a = read_archive(init);
    if (stage.init_from == InitFrom::X2Adapted && a.scale == 2) {
      cfg.nf = static_cast<int>(a.nf);
      a = adapt_weights_x2_to_x4(a, cfg);
      log << "adapted x2 weights from " << init.string() << "\n";
    } else {
      cfg = infer_config(a, cfg);
      log << "loaded weights from " << init.string() << "\n";
    }
    if (cfg.scale != stage.scale) {
      throw Error(init.string() + " holds x" + std::to_string(cfg.scale) +
                  " weights but stage " + roman_numeral(stage.stage) +
                  " trains x" + std::to_string(stage.scale));
    }
    model = from_archive(a, cfg, false);
  }

  const DatasetLayout layout{o.data_root, "train"};
  if (!fs::is_directory(layout.lr_root(stage.scale))) {
    throw Error("no x" + std::to_string(stage.scale) + " frames at " +
                layout.lr_root(stage.scale).string() +
                "; run prepare-data first");
  }
  PatchSampler sampler(
      load_frame_pairs(layout.hr_root(), layout.lr_root(stage.scale), stage.scale),
      stage.scale);
  log << "training on " << sampler.frame_count() << " frames\n";

  StageOptions so;
  so.log_every = o.log_every;
  so.on_log = [&](const TraceRow& r) {
    char line[96];
    std::snprintf(line, sizeof line, "iter %lld  lr %.3g  loss %.6g\n",
                  static_cast<long long>(r.iter), r.lr, r.loss);
    log << line;
  };
  const StageResult result = run_stage(model, stage, sampler, o.seed, so);

  save_weights(model, o.out_weights);
  const fs::path csv = o.loss_csv.value_or(o.out_weights.string() + ".loss.csv");
  write_trace_csv(result.trace, csv);
  log << "wrote " << o.out_weights.string() << " and " << csv.string() << "\n";
  (void)err;
  return 0;
}

int cmd_adapt(const AdaptOptions& o, std::ostream& out, std::ostream& err) {
  Progress log(out, o.quiet);
  const WeightArchive src = read_archive(o.x2_weights);
  ModelConfig x2cfg = infer_config(src);
  ModelConfig x4cfg = x2cfg;
  x4cfg.scale = 4;
  const WeightArchive adapted = adapt_weights_x2_to_x4(src, x4cfg);

  const Model x2 = from_archive(src, x2cfg, false);
  const Model x4 = from_archive(adapted, x4cfg, false);
  const Tensor probe = random_probe(o.seed, Shape{1, 3, 24, 32});
  const Tensor want = nearest_upsample(x2.forward(probe), 2);
  const Tensor got = x4.forward(probe);
  double residual = 0.0;
  for (std::size_t i = 0; i < got.data().size(); ++i) {
    residual = std::max<double>(residual, std::abs(got.data()[i] - want.data()[i]));
  }
  char line[128];
  std::snprintf(line, sizeof line,
                "verification residual max|x4 - nearest(x2)| = %.3g\n", residual);
  log << line;
  if (!(residual < 1e-6)) {
    err << "error: adapted model does not reproduce the nearest upsampling of "
           "the x2 model\n";
    return 1;
  }
  write_archive(adapted, o.out_weights);
  log << "wrote " << o.out_weights.string() << "\n";
  return 0;
}

int cmd_infer(const InferOptions& o, std::ostream& out, std::ostream& err) {
  Progress log(out, o.quiet);
  const Model model = model_from_file(o.weights);
  const int scale = model.config().scale;

  std::vector<fs::path> rels;
  fs::path base;
  if (fs::is_regular_file(o.input)) {
    base = o.input.parent_path();
    rels.push_back(o.input.filename());
  } else if (fs::is_directory(o.input)) {
    base = o.input;
    rels = list_png_files(o.input);
  } else {
    throw Error("input " + o.input.string() + " does not exist");
  }
  if (rels.empty()) {
    err << "warning: no PNG files under " << o.input.string() << "\n";
    return 0;
  }

  int failures = 0;
  for (const fs::path& rel : rels) {
    try {
      const ImageBuffer lr = read_png(base / rel);
      const fs::path dst = o.out_dir / rel;
      fs::create_directories(dst.parent_path());
      write_png(run_model(model, lr), dst);
      if (o.baseline) {
        fs::path bic = dst;
        bic.replace_filename(dst.stem().string() + "_bicubic.png");
        write_png(bicubic_resize(lr, lr.width() * scale, lr.height() * scale),
                  bic);
      }
      log << rel.generic_string() << " -> " << dst.string() << "\n";
    } catch (const Error& e) {
      err << "error: " << (base / rel).string() << ": " << e.what() << "\n";
      ++failures;
    }
  }
  if (failures) err << failures << " of " << rels.size() << " files failed\n";
  return failures ? 1 : 0;
}

int cmd_eval(const EvalOptions& o, std::ostream& out, std::ostream& err) {
  Progress log(out, o.quiet);
  Upscaler up;
  std::optional<Model> model;
  if (o.method == "model") {
    if (!o.weights) throw Error("eval: --weights is required for method 'model'");
    model.emplace(model_from_file(*o.weights));
    up = [&](const ImageBuffer& lr) { return run_model(*model, lr); };
  } else if (o.method == "bicubic") {
    const int s = o.scale;
    up = [s](const ImageBuffer& lr) {
      return bicubic_resize(lr, lr.width() * s, lr.height() * s);
    };
  } else if (o.method == "identity") {
    up = [](const ImageBuffer& lr) { return lr; };
  } else {
    throw Error("eval: unknown method '" + o.method +
                "' (expected model, bicubic or identity)");
  }
  const EvalReport r = eval_sequence(up, o.lr_dir, o.hr_dir);
  for (const FrameScore& f : r.frames) {
    log << f.frame << "  " << format_db(f.psnr_db) << " dB\n";
  }
  log << "mean PSNR over " << r.frames.size() << " frames: "
      << format_db(r.mean_db) << " dB (RGB, 8-bit peak 255)\n";
  if (o.report_csv) write_eval_csv(r, *o.report_csv);
  (void)err;
  return 0;
}

int cmd_info(const InfoOptions& o, std::ostream& out, std::ostream& err) {
  const Model model = o.weights ? model_from_file(*o.weights) : [&] {
    ModelConfig cfg;
    cfg.scale = o.scale;
    cfg.nf = o.nf;
    return build_model(cfg, 0);
  }();
  const ModelConfig& cfg = model.config();
  out << "model: x" << cfg.scale << " nf=" << cfg.nf << " convs=" << cfg.nb_convs
      << " activation=" << to_string(cfg.activation)
      << " residual=" << (cfg.residual ? "on" : "off") << "\n";
  for (const Parameter& p : model.parameters()) {
    out << "  " << p.name << " " << join_dims(p.dims) << "\n";
  }
  out << "params: " << count_params(model) << "\n";
  out << "FLOPs at " << o.lr_height << "x" << o.lr_width << " LR input:\n";
  for (const LayerCost& c : flop_table(cfg, o.lr_height, o.lr_width)) {
    out << "  " << c.layer << " (" << c.detail << "): " << c.flops << "\n";
  }
  out << "total FLOPs: " << count_flops(model, o.lr_height, o.lr_width)
      << " (1 MAC = 2 FLOPs)\n";
  (void)err;
  return 0;
}

}  // namespace elsr
