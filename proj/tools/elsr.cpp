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

#include <CLI11.hpp>

#include <iostream>

#include "elsr/commands.hpp"
#include "elsr/dataset.hpp"
#include "elsr/error.hpp"

namespace {

// Copies a flag into an optional only when it was given.
template <typename T>
void set_if(CLI::Option* opt, const T& value, std::optional<T>& dst) {
  if (opt->count() > 0) dst = value;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ELSR super-resolution toolkit"};
  app.require_subcommand(1);
  std::uint64_t seed = 0;
  bool quiet = false;
  app.add_option("--seed", seed, "Random seed")->capture_default_str();
  app.add_flag("-q,--quiet", quiet, "Only print warnings and errors");
  std::string config;
  app.add_option("--config", config, "Stage config file (train)");
  app.fallthrough();

  // prepare-data
  elsr::PrepareOptions prep;
  auto* c_prep = app.add_subcommand(
      "prepare-data", "Bicubic-downscale an HR frame tree into LR frames");
  c_prep->add_option("hr_root", prep.hr_root, "HR frame directory")->required();
  c_prep->add_option("out_root", prep.out_root, "Output LR directory")->required();
  c_prep->add_option("-s,--scale", prep.scale, "Downscale factor")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  // make-toy
  elsr::ToyDatasetOptions toy;
  std::string toy_root;
  auto* c_toy = app.add_subcommand(
      "make-toy", "Write a synthetic moving-shapes dataset (HR frames)");
  c_toy->add_option("root", toy_root, "Dataset root")->required();
  c_toy->add_option("--sequences", toy.sequences)->capture_default_str();
  c_toy->add_option("--train-frames", toy.train_frames)->capture_default_str();
  c_toy->add_option("--val-frames", toy.val_frames)->capture_default_str();
  c_toy->add_option("--width", toy.width)->capture_default_str();
  c_toy->add_option("--height", toy.height)->capture_default_str();

  // train
  elsr::TrainOptions tr;
  std::int64_t iters = 0;
  int batch = 0, patch = 0;
  float lr = 0;
  std::string init, loss_csv;
  auto* c_train = app.add_subcommand("train", "Run one training stage");
  c_train->add_option("data_root", tr.data_root, "Dataset root")->required();
  c_train->add_option("out_weights", tr.out_weights, "Output weight archive")
      ->required();
  c_train->add_option("--stage", tr.stage, "Stage number 1-6")
      ->capture_default_str()
      ->check(CLI::Range(1, 6));
  auto* o_iters = c_train->add_option(
      "--iters-override", iters,
      "Run K iterations; milestones are scaled proportionally");
  auto* o_batch = c_train->add_option("--batch", batch, "Override batch size");
  auto* o_patch = c_train->add_option("--patch", patch, "Override HR patch size");
  auto* o_lr = c_train->add_option("--lr", lr, "Override initial learning rate");
  auto* o_init = c_train->add_option(
      "--init", init, "Starting weights (default: stage<N-1>.elsr beside output)");
  auto* o_csv = c_train->add_option("--loss-csv", loss_csv,
                                    "Loss trace CSV (default: <out>.loss.csv)");
  c_train->add_option("--nf", tr.nf, "Feature channels for scratch init")
      ->capture_default_str();
  c_train->add_option("--log-every", tr.log_every)->capture_default_str();

  // adapt
  elsr::AdaptOptions ad;
  auto* c_adapt = app.add_subcommand(
      "adapt", "Turn x2 weights into x4 weights by repeating the tail conv");
  c_adapt->add_option("x2_weights", ad.x2_weights)->required();
  c_adapt->add_option("out_weights", ad.out_weights)->required();

  // infer
  elsr::InferOptions inf;
  auto* c_infer = app.add_subcommand("infer", "Upscale PNG frames");
  c_infer->add_option("weights", inf.weights)->required();
  c_infer->add_option("input", inf.input, "PNG file or directory")->required();
  c_infer->add_option("out_dir", inf.out_dir)->required();
  c_infer->add_flag("--baseline", inf.baseline,
                    "Also write a bicubic upscale as <stem>_bicubic.png");

  // eval
  elsr::EvalOptions ev;
  std::string ev_weights, ev_csv;
  auto* c_eval = app.add_subcommand("eval", "Mean PSNR against HR frames");
  c_eval->add_option("lr_dir", ev.lr_dir)->required();
  c_eval->add_option("hr_dir", ev.hr_dir)->required();
  auto* o_ev_w = c_eval->add_option("-w,--weights", ev_weights);
  c_eval->add_option("--method", ev.method, "model, bicubic or identity")
      ->capture_default_str()
      ->check(CLI::IsMember({"model", "bicubic", "identity"}));
  c_eval->add_option("-s,--scale", ev.scale, "Scale for the bicubic method")
      ->capture_default_str();
  auto* o_ev_csv = c_eval->add_option("--report", ev_csv, "Per-frame CSV report");

  // info
  elsr::InfoOptions info;
  std::string info_weights;
  auto* c_info = app.add_subcommand("info", "Layer shapes, parameters, FLOPs");
  auto* o_info_w = c_info->add_option("weights", info_weights);
  c_info->add_option("-s,--scale", info.scale)->capture_default_str();
  c_info->add_option("--nf", info.nf)->capture_default_str();
  c_info->add_option("--height", info.lr_height, "LR height")->capture_default_str();
  c_info->add_option("--width", info.lr_width, "LR width")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_prep->parsed()) {
      prep.quiet = quiet;
      return elsr::cmd_prepare_data(prep, std::cout, std::cerr);
    }
    if (c_toy->parsed()) {
      toy.seed = seed;
      const int n = elsr::generate_toy_dataset(toy_root, toy);
      if (!quiet) std::cout << "wrote " << n << " HR frames under " << toy_root << "\n";
      return 0;
    }
    if (c_train->parsed()) {
      if (config.empty()) throw elsr::Error("train needs --config <stages.cfg>");
      tr.config_path = config;
      tr.seed = seed;
      tr.quiet = quiet;
      set_if(o_iters, iters, tr.iters_override);
      set_if(o_batch, batch, tr.batch_override);
      set_if(o_patch, patch, tr.patch_override);
      set_if(o_lr, lr, tr.lr_override);
      if (o_init->count()) tr.init_weights = init;
      if (o_csv->count()) tr.loss_csv = loss_csv;
      return elsr::cmd_train(tr, std::cout, std::cerr);
    }
    if (c_adapt->parsed()) {
      ad.seed = seed;
      ad.quiet = quiet;
      return elsr::cmd_adapt(ad, std::cout, std::cerr);
    }
    if (c_infer->parsed()) {
      inf.quiet = quiet;
      return elsr::cmd_infer(inf, std::cout, std::cerr);
    }
    if (c_eval->parsed()) {
      ev.quiet = quiet;
      if (o_ev_w->count()) ev.weights = ev_weights;
      if (o_ev_csv->count()) ev.report_csv = ev_csv;
      return elsr::cmd_eval(ev, std::cout, std::cerr);
    }
    if (c_info->parsed()) {
      if (o_info_w->count()) info.weights = info_weights;
      return elsr::cmd_info(info, std::cout, std::cerr);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
