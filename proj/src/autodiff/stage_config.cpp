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

#include "elsr/stage_config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace elsr {

const char* to_string(InitFrom init) {
  switch (init) {
    case InitFrom::Scratch:
      return "scratch";
    case InitFrom::PreviousStage:
      return "previous-stage";
    case InitFrom::X2Adapted:
      return "x2-adapted";
  }
  return "?";
}

InitFrom parse_init_from(const std::string& text) {
  if (text == "scratch") return InitFrom::Scratch;
  if (text == "previous-stage") return InitFrom::PreviousStage;
  if (text == "x2-adapted") return InitFrom::X2Adapted;
  throw Error("unknown init_from '" + text +
              "' (expected scratch, previous-stage or x2-adapted)");
}

std::string roman_numeral(int stage) {
  static const char* kNames[] = {"I", "II", "III", "IV", "V", "VI"};
  if (stage >= 1 && stage <= 6) return kNames[stage - 1];
  return std::to_string(stage);
}

void TrainStageConfig::validate() const {
  const std::string where = "stage " + roman_numeral(stage) + ": ";
  if (scale != 2 && scale != 4) {
    throw Error(where + "scale must be 2 or 4, got " + std::to_string(scale));
  }
  if (batch_size < 1) throw Error(where + "batch_size must be >= 1");
  if (patch_size_hr < 1) throw Error(where + "patch_size_hr must be >= 1");
  if (patch_size_hr % scale != 0) {
    throw Error(where + "patch_size_hr " + std::to_string(patch_size_hr) +
                " is not divisible by scale " + std::to_string(scale));
  }
  if (total_iters < 0) throw Error(where + "total_iters must be >= 0");
  if (!(lr_init >= 0.0f)) throw Error(where + "lr_init must be >= 0");
  if (!(lr_gamma > 0.0f && lr_gamma <= 1.0f)) {
    throw Error(where + "lr_gamma must lie in (0, 1]");
  }
  for (std::size_t i = 0; i < lr_milestones.size(); ++i) {
    if (lr_milestones[i] < 0 || lr_milestones[i] >= total_iters) {
      throw Error(where + "milestone " + std::to_string(lr_milestones[i]) +
                  " is outside [0, total_iters)");
    }
    if (i > 0 && lr_milestones[i] <= lr_milestones[i - 1]) {
      throw Error(where + "milestones must be strictly increasing");
    }
  }
}

float lr_at(const TrainStageConfig& config, std::int64_t iter) {
  if (iter < 0 || iter >= config.total_iters) {
    throw Error("lr_at: iteration " + std::to_string(iter) +
                " outside [0, " + std::to_string(config.total_iters) + ")");
  }
  float lr = config.lr_init;
  for (std::int64_t m : config.lr_milestones) {
    if (m <= iter) lr *= config.lr_gamma;
  }
  return lr;
}

TrainStageConfig with_iterations(const TrainStageConfig& config,
                                 std::int64_t iters) {
  if (iters < 0) throw Error("iteration override must be >= 0");
  TrainStageConfig out = config;
  out.total_iters = iters;
  out.lr_milestones.clear();
  if (config.total_iters <= 0) return out;
  for (std::int64_t m : config.lr_milestones) {
    const std::int64_t scaled = m * iters / config.total_iters;
    if (scaled >= iters) continue;
    if (!out.lr_milestones.empty() && scaled <= out.lr_milestones.back()) {
      continue;
    }
    out.lr_milestones.push_back(scaled);
  }
  return out;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw Error("stage config line " + std::to_string(line) + ": " + msg);
}

std::int64_t parse_int(const std::string& text, int line) {
  std::int64_t v = 0;
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    fail(line, "expected an integer, got '" + text + "'");
  }
  return v;
}

float parse_float(const std::string& text, int line) {
  // from_chars for float is not available in every libstdc++ we target.
  std::istringstream is(text);
  is.imbue(std::locale::classic());
  double v = 0.0;
  if (!(is >> v) || !is.eof()) {
    fail(line, "expected a number, got '" + text + "'");
  }
  return static_cast<float>(v);
}

std::vector<std::int64_t> parse_list(std::string text, int line) {
  text = trim(text);
  if (!text.empty() && text.front() == '[') {
    if (text.back() != ']') fail(line, "unterminated milestone list");
    text = trim(text.substr(1, text.size() - 2));
  }
  std::vector<std::int64_t> out;
  if (text.empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    out.push_back(parse_int(trim(item), line));
  }
  return out;
}

struct Section {
  int header_line = 0;
  TrainStageConfig config;
  std::set<std::string> seen;
};

const std::set<std::string> kRequired = {
    "scale",         "loss",          "batch_size", "patch_size_hr",
    "total_iters",   "lr_init",       "lr_milestones", "lr_gamma",
    "init_from"};

void finish(Section& s) {
  for (const std::string& k : kRequired) {
    if (!s.seen.count(k)) {
      fail(s.header_line, "section [stage." + std::to_string(s.config.stage) +
                              "] is missing key '" + k + "'");
    }
  }
  try {
    s.config.validate();
  } catch (const Error& e) {
    fail(s.header_line, e.what());
  }
}

}  // namespace

std::vector<TrainStageConfig> parse_stage_configs(std::istream& in) {
  std::vector<TrainStageConfig> out;
  std::vector<Section> sections;
  std::set<int> ids;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string text = raw;
    const auto hash = text.find_first_of("#;");
    if (hash != std::string::npos) text = text.substr(0, hash);
    text = trim(text);
    if (text.empty()) continue;

    if (text.front() == '[') {
      if (text.back() != ']') fail(line, "malformed section header");
      const std::string name = trim(text.substr(1, text.size() - 2));
      if (name.rfind("stage.", 0) != 0) {
        fail(line, "unknown section '" + name + "' (expected [stage.N])");
      }
      const std::int64_t id = parse_int(name.substr(6), line);
      if (id < 1 || id > 6) fail(line, "stage number must be 1..6");
      if (!ids.insert(static_cast<int>(id)).second) {
        fail(line, "duplicate section [stage." + std::to_string(id) + "]");
      }
      if (!sections.empty()) finish(sections.back());
      Section s;
      s.header_line = line;
      s.config.stage = static_cast<int>(id);
      sections.push_back(std::move(s));
      continue;
    }

    const auto eq = text.find('=');
    if (eq == std::string::npos) fail(line, "expected key = value");
    if (sections.empty()) fail(line, "key outside of a [stage.N] section");
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    Section& s = sections.back();
    if (!s.seen.insert(key).second) fail(line, "duplicate key '" + key + "'");
    TrainStageConfig& c = s.config;
    try {
      if (key == "stage") {
        if (parse_int(value, line) != c.stage) {
          fail(line, "stage key disagrees with section header");
        }
      } else if (key == "scale") {
        c.scale = static_cast<int>(parse_int(value, line));
      } else if (key == "loss") {
        c.loss = parse_loss_kind(value);
      } else if (key == "batch_size") {
        c.batch_size = static_cast<int>(parse_int(value, line));
      } else if (key == "patch_size_hr") {
        c.patch_size_hr = static_cast<int>(parse_int(value, line));
      } else if (key == "total_iters") {
        c.total_iters = parse_int(value, line);
      } else if (key == "lr_init") {
        c.lr_init = parse_float(value, line);
      } else if (key == "lr_milestones") {
        c.lr_milestones = parse_list(value, line);
      } else if (key == "lr_gamma") {
        c.lr_gamma = parse_float(value, line);
      } else if (key == "init_from") {
        c.init_from = parse_init_from(value);
      } else if (key == "augment_hflip") {
        if (value != "true" && value != "false") {
          fail(line, "augment_hflip must be true or false");
        }
        c.augment_hflip = value == "true";
      } else {
        fail(line, "unknown key '" + key + "'");
      }
    } catch (const Error& e) {
      const std::string msg = e.what();
      if (msg.rfind("stage config line", 0) == 0) throw;
      fail(line, msg);
    }
  }
  if (!sections.empty()) finish(sections.back());
  for (Section& s : sections) out.push_back(s.config);
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.stage < b.stage; });
  return out;
}

std::vector<TrainStageConfig> load_stage_configs(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open stage config " + path.string());
  return parse_stage_configs(in);
}

std::string format_stage_config(const TrainStageConfig& c) {
  std::ostringstream os;
  os << "stage " << roman_numeral(c.stage) << ": scale=x" << c.scale
     << " loss=" << to_string(c.loss) << " batch=" << c.batch_size
     << " patch_hr=" << c.patch_size_hr << " iters=" << c.total_iters
     << " lr=" << c.lr_init << " milestones=[";
  for (std::size_t i = 0; i < c.lr_milestones.size(); ++i) {
    if (i) os << ",";
    os << c.lr_milestones[i];
  }
  os << "] gamma=" << c.lr_gamma << " init=" << to_string(c.init_from);
  if (c.augment_hflip) os << " hflip";
  return os.str();
}

std::vector<TrainStageConfig> reference_schedule() {
  auto make = [](int stage, int scale, LossKind loss, int patch,
                 std::int64_t iters, float lr,
                 std::vector<std::int64_t> milestones, InitFrom init) {
    TrainStageConfig c;
    c.stage = stage;
    c.scale = scale;
    c.loss = loss;
    c.batch_size = 64;
    c.patch_size_hr = patch;
    c.total_iters = iters;
    c.lr_init = lr;
    c.lr_milestones = std::move(milestones);
    c.lr_gamma = 0.5f;
    c.init_from = init;
    return c;
  };
  return {
      make(1, 2, LossKind::L1, 256, 500000, 5e-4f, {200000, 400000},
           InitFrom::Scratch),
      make(2, 4, LossKind::L1, 256, 500000, 5e-5f, {100000, 300000, 450000},
           InitFrom::X2Adapted),
      make(3, 4, LossKind::L1, 256, 300000, 2e-4f, {200000},
           InitFrom::PreviousStage),
      make(4, 4, LossKind::MSE, 256, 1000000, 2e-4f, {300000, 600000, 900000},
           InitFrom::PreviousStage),
      make(5, 4, LossKind::MSE, 512, 500000, 2e-4f,
           {100000, 200000, 300000, 400000}, InitFrom::PreviousStage),
      make(6, 4, LossKind::MSE, 640, 50000, 2e-5f, {},
           InitFrom::PreviousStage),
  };
}

}  // namespace elsr
