#include "morp/config.hpp"

#include <fstream>
#include <set>

#include "json.hpp"
#include "morp/errors.hpp"

namespace morp {
namespace {

using nlohmann::json;

// Pulls known keys out of an object and rejects anything left over.
class Section {
 public:
  Section(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj.is_object()) throw ConfigError(path_ + ": expected an object");
  }

  template <typename T>
  void get(const char* key, T& out) {
    taken_.insert(key);
    if (!obj_.contains(key)) return;
    try {
      out = obj_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError(path_ + "." + key + ": wrong type");
    }
  }

  std::optional<json> sub(const char* key) {
    taken_.insert(key);
    if (!obj_.contains(key)) return std::nullopt;
    return obj_.at(key);
  }

  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it)
      if (!taken_.count(it.key()))
        throw ConfigError(path_ + ": unknown key '" + it.key() + "'");
  }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string> taken_;
};

std::vector<ClassId> parse_classes(const json& arr, const std::string& path) {
  if (!arr.is_array()) throw ConfigError(path + ": expected an array");
  std::vector<ClassId> out;
  for (const auto& v : arr) {
    int id = v.get<int>();
    if (id < 0 || id >= kNumClasses)
      throw ConfigError(path + ": class id out of range");
    out.push_back(class_from_value(static_cast<std::uint8_t>(id)));
  }
  return out;
}

void parse_apex(const json& obj, const std::string& path, ApexParams& out,
                bool allow_class_overrides, MorpConfig* cfg) {
  Section s(obj, path);
  s.get("window", out.window);
  s.get("polyorder", out.polyorder);
  s.get("quantile", out.quantile);
  s.get("min_distance", out.min_distance);
  s.get("radial_boost", out.radial_boost);
  s.get("deriv_step", out.deriv_step);
  if (allow_class_overrides) {
    if (auto oil = s.sub("oil")) {
      ApexParams p = out;
      parse_apex(*oil, path + ".oil", p, false, nullptr);
      cfg->apex_per_class[raw(ClassId::oil)] = p;
    }
    if (auto la = s.sub("lookalike")) {
      ApexParams p = out;
      parse_apex(*la, path + ".lookalike", p, false, nullptr);
      cfg->apex_per_class[raw(ClassId::lookalike)] = p;
    }
  }
  s.finish();
}

void parse_edit(const json& obj, const std::string& path, EditParams& out,
                bool allow_class_overrides, MorpConfig* cfg) {
  Section s(obj, path);
  s.get("fan_half_angle", out.fan_half_angle);
  s.get("n_rays", out.n_rays);
  s.get("p_expand", out.p_expand);
  s.get("s_expand", out.s_expand);
  s.get("s_shrink", out.s_shrink);
  s.get("r_max_expand", out.r_max_expand);
  s.get("r_max_shrink", out.r_max_shrink);
  if (allow_class_overrides) {
    s.get("min_edit_area", cfg->min_edit_area);
    if (auto oil = s.sub("oil")) {
      EditParams p = out;
      parse_edit(*oil, path + ".oil", p, false, nullptr);
      cfg->edit_per_class[raw(ClassId::oil)] = p;
    }
    if (auto la = s.sub("lookalike")) {
      EditParams p = out;
      parse_edit(*la, path + ".lookalike", p, false, nullptr);
      cfg->edit_per_class[raw(ClassId::lookalike)] = p;
    }
  }
  s.finish();
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }

  RunConfig cfg;
  Section root(doc, "config");

  if (auto seed = root.sub("seed")) {
    if (!seed->is_number_unsigned())
      throw ConfigError("seed: must be a non-negative integer");
    cfg.morp.seed = seed->get<std::uint64_t>();
    cfg.seed_set = true;
  }

  if (auto sel = root.sub("selection")) {
    Section s(*sel, "selection");
    s.get("k", cfg.morp.n_regions);
    std::string mode = cfg.morp.selection_mode == SelectionMode::largest
                           ? "largest"
                           : "random";
    s.get("mode", mode);
    if (mode == "largest")
      cfg.morp.selection_mode = SelectionMode::largest;
    else if (mode == "random")
      cfg.morp.selection_mode = SelectionMode::random;
    else
      throw ConfigError("selection.mode: must be 'largest' or 'random'");
    s.get("diversity", cfg.morp.diversity);
    if (auto t = s.sub("target_classes"))
      cfg.morp.target_classes = parse_classes(*t, "selection.target_classes");
    s.get("large_oil_fraction", cfg.morp.large_area_fraction);
    s.get("apices_per_region", cfg.morp.apices_per_region);
    s.finish();
  }

  if (auto pl = root.sub("placement")) {
    Section s(*pl, "placement");
    s.get("max_shift", cfg.morp.max_shift);
    if (auto f = s.sub("forbid"))
      cfg.morp.forbid = parse_classes(*f, "placement.forbid");
    if (auto a = s.sub("allow"))
      cfg.morp.allow = parse_classes(*a, "placement.allow");
    s.get("max_paste_retries", cfg.morp.max_paste_retries);
    s.get("flat_run_min_len", cfg.morp.flat_run_min_len);
    s.get("flat_kappa", cfg.morp.flat_kappa);
    s.finish();
  }

  if (auto ap = root.sub("apex"))
    parse_apex(*ap, "apex", cfg.morp.apex, true, &cfg.morp);
  if (auto ed = root.sub("edit"))
    parse_edit(*ed, "edit", cfg.morp.edit, true, &cfg.morp);

  if (auto cl = root.sub("cleanup")) {
    Section s(*cl, "cleanup");
    s.get("min_px", cfg.morp.min_px);
    s.finish();
  }

  if (auto lo = root.sub("loss")) {
    Section s(*lo, "loss");
    s.get("lambda_ce", cfg.loss.lambda_ce);
    s.get("lambda_ftl", cfg.loss.lambda_ftl);
    double l21 = 0.40, l02 = 0.30;
    s.get("lambda_lookalike_to_oil", l21);
    s.get("lambda_sea_to_lookalike", l02);
    cfg.loss.pairs = {{ClassId::lookalike, ClassId::oil, l21},
                      {ClassId::sea, ClassId::lookalike, l02}};
    s.get("tversky_alpha", cfg.loss.tversky_alpha);
    s.get("tversky_beta", cfg.loss.tversky_beta);
    s.get("tversky_gamma", cfg.loss.tversky_gamma);
    s.get("gamma_p", cfg.loss.gamma_p);
    s.get("eps", cfg.loss.eps);
    s.get("lambda_synth", cfg.loss.lambda_synth);
    std::string norm = cfg.loss.synth_norm == SynthNorm::raw ? "raw" : "percent";
    s.get("synth_norm", norm);
    if (norm == "raw")
      cfg.loss.synth_norm = SynthNorm::raw;
    else if (norm == "percent")
      cfg.loss.synth_norm = SynthNorm::percent;
    else
      throw ConfigError("loss.synth_norm: must be 'raw' or 'percent'");
    s.finish();
  }

  if (auto pa = root.sub("patches")) {
    Section s(*pa, "patches");
    s.get("window", cfg.patches.window);
    s.get("stride", cfg.patches.stride);
    s.get("neg_pos_ratio", cfg.patches.neg_pos_ratio);
    s.get("multiscale_min", cfg.patches.multiscale_min);
    s.get("multiscale_max", cfg.patches.multiscale_max);
    s.get("multiscale_count", cfg.patches.multiscale_count);
    s.get("percentile_lo", cfg.patches.percentile_lo);
    s.get("percentile_hi", cfg.patches.percentile_hi);
    s.get("median_filter", cfg.patches.median_filter);
    s.finish();
  }

  root.finish();
  cfg.morp.validate();
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file " + path.string());
  std::string text{std::istreambuf_iterator<char>(f),
                   std::istreambuf_iterator<char>()};
  return parse_run_config(text);
}

std::string dump_run_config(const RunConfig& cfg) {
  auto classes_json = [](const std::vector<ClassId>& v) {
    json arr = json::array();
    for (ClassId c : v) arr.push_back(int(raw(c)));
    return arr;
  };
  auto apex_json = [](const ApexParams& a) {
    return json{{"window", a.window},
                {"polyorder", a.polyorder},
                {"quantile", a.quantile},
                {"min_distance", a.min_distance},
                {"radial_boost", a.radial_boost},
                {"deriv_step", a.deriv_step}};
  };
  auto edit_json = [](const EditParams& e) {
    return json{{"fan_half_angle", e.fan_half_angle},
                {"n_rays", e.n_rays},
                {"p_expand", e.p_expand},
                {"s_expand", e.s_expand},
                {"s_shrink", e.s_shrink},
                {"r_max_expand", e.r_max_expand},
                {"r_max_shrink", e.r_max_shrink}};
  };

  json apex = apex_json(cfg.morp.apex);
  if (auto it = cfg.morp.apex_per_class.find(raw(ClassId::oil));
      it != cfg.morp.apex_per_class.end())
    apex["oil"] = apex_json(it->second);
  if (auto it = cfg.morp.apex_per_class.find(raw(ClassId::lookalike));
      it != cfg.morp.apex_per_class.end())
    apex["lookalike"] = apex_json(it->second);

  json edit = edit_json(cfg.morp.edit);
  edit["min_edit_area"] = cfg.morp.min_edit_area;
  if (auto it = cfg.morp.edit_per_class.find(raw(ClassId::oil));
      it != cfg.morp.edit_per_class.end())
    edit["oil"] = edit_json(it->second);
  if (auto it = cfg.morp.edit_per_class.find(raw(ClassId::lookalike));
      it != cfg.morp.edit_per_class.end())
    edit["lookalike"] = edit_json(it->second);

  json doc{
      {"seed", cfg.morp.seed},
      {"selection",
       {{"k", cfg.morp.n_regions},
        {"mode", cfg.morp.selection_mode == SelectionMode::largest ? "largest"
                                                                   : "random"},
        {"diversity", cfg.morp.diversity},
        {"target_classes", classes_json(cfg.morp.target_classes)},
        {"large_oil_fraction", cfg.morp.large_area_fraction},
        {"apices_per_region", cfg.morp.apices_per_region}}},
      {"placement",
       {{"max_shift", cfg.morp.max_shift},
        {"forbid", classes_json(cfg.morp.forbid)},
        {"allow", classes_json(cfg.morp.allow)},
        {"max_paste_retries", cfg.morp.max_paste_retries},
        {"flat_run_min_len", cfg.morp.flat_run_min_len},
        {"flat_kappa", cfg.morp.flat_kappa}}},
      {"apex", apex},
      {"edit", edit},
      {"cleanup", {{"min_px", cfg.morp.min_px}}},
      {"loss",
       {{"lambda_ce", cfg.loss.lambda_ce},
        {"lambda_ftl", cfg.loss.lambda_ftl},
        {"lambda_lookalike_to_oil", cfg.loss.pairs[0].weight},
        {"lambda_sea_to_lookalike", cfg.loss.pairs[1].weight},
        {"tversky_alpha", cfg.loss.tversky_alpha},
        {"tversky_beta", cfg.loss.tversky_beta},
        {"tversky_gamma", cfg.loss.tversky_gamma},
        {"gamma_p", cfg.loss.gamma_p},
        {"eps", cfg.loss.eps},
        {"lambda_synth", cfg.loss.lambda_synth},
        {"synth_norm",
         cfg.loss.synth_norm == SynthNorm::raw ? "raw" : "percent"}}},
      {"patches",
       {{"window", cfg.patches.window},
        {"stride", cfg.patches.stride},
        {"neg_pos_ratio", cfg.patches.neg_pos_ratio},
        {"multiscale_min", cfg.patches.multiscale_min},
        {"multiscale_max", cfg.patches.multiscale_max},
        {"multiscale_count", cfg.patches.multiscale_count},
        {"percentile_lo", cfg.patches.percentile_lo},
        {"percentile_hi", cfg.patches.percentile_hi},
        {"median_filter", cfg.patches.median_filter}}},
  };
  return doc.dump(2) + "\n";
}

}  // namespace morp
