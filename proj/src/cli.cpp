#include "floorscan/cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "floorscan/error.hpp"
#include "floorscan/evaluate.hpp"
#include "floorscan/pipeline.hpp"
#include "floorscan/synth.hpp"

namespace floorscan {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw Error(ErrorCode::kIo, "cannot write " + path.string());
}

struct Settings {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir = ".";

  void attach(CLI::App* cmd) {
    cmd->add_option("-c,--config", config_path, "key = value configuration file");
    cmd->add_option("--set", overrides, "override one setting, key=value (repeatable)");
    cmd->add_option("-o,--out", out_dir, "output directory");
  }

  PipelineConfig load() const {
    PipelineConfig config;
    if (!config_path.empty()) config.merge_text(read_text(config_path));
    for (const auto& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) {
        throw Error(ErrorCode::kInvalidArgument, "--set expects key=value, got '" + kv + "'");
      }
      auto key = kv.substr(0, eq);
      while (!key.empty() && key.back() == ' ') key.pop_back();
      config.set(key, kv.substr(eq + 1));
    }
    return config;
  }
};

// Shared by every subcommand writing artifacts.
class Session {
 public:
  Session(const PipelineConfig& config, fs::path out, std::ostream& err)
      : config_(config), out_(std::move(out)), err_(err) {
    std::error_code ec;
    fs::create_directories(out_, ec);
    if (ec) throw Error(ErrorCode::kIo, "cannot create " + out_.string() + ": " + ec.message());
  }

  const PipelineConfig& config() const { return config_; }

  template <class F>
  auto stage(const char* name, F&& f) {
    const auto t = Clock::now();
    try {
      auto result = f();
      err_ << "time " << name << " " << std::chrono::duration<double>(Clock::now() - t).count() << " s\n";
      return result;
    } catch (const StageError&) {
      throw;
    } catch (const Error& e) {
      throw StageError(name, e);
    }
  }

  void write(const std::string& name, const std::string& text) const { write_text(out_ / name, text); }

  void warn(const std::vector<std::string>& warnings) const {
    for (const auto& w : warnings) err_ << "warning: " << w << "\n";
  }
  void note(const std::string& msg) const { err_ << "note: " << msg << "\n"; }

  TriangleMesh load_mesh_file(const fs::path& path) const {
    TriangleMesh mesh = load_mesh(path);
    if (mesh.empty()) throw Error(ErrorCode::kEmptyInput, path.string() + " has no faces");
    // Intermediate artifacts are already in meters.
    if (!is_oriented(mesh) && config_.unit_scale != 1.0) {
      for (Vec3& v : mesh.vertices) v = v * config_.unit_scale;
    }
    return mesh;
  }

  OrientStage orient(TriangleMesh mesh, AnnotationSet annotations, bool with_annotations) {
    OrientStage st = stage("orient", [&] { return run_orient(std::move(mesh), std::move(annotations), config_); });
    warn(st.report.warnings);
    write("oriented.obj", format_mesh(st.mesh, config_));
    write("orientation.json", format_orientation_report(st.report, config_));
    if (with_annotations) write("oriented.annotations.json", format_annotations(st.annotations));
    return st;
  }

  LevelsStage levels(const TriangleMesh& mesh, const AnnotationSet& annotations, bool with_annotations) {
    if (!is_oriented(mesh)) note("input mesh has not been oriented");
    LevelsStage st = stage("levels", [&] { return run_levels(mesh, annotations, config_); });
    warn(st.partition.warnings);
    write("levels.json", format_levels_report(st, config_));
    for (std::size_t i = 0; i < st.story_meshes.size(); ++i) {
      const std::string stem = "story_" + std::to_string(i);
      write(stem + ".obj", format_mesh(st.story_meshes[i], config_));
      if (with_annotations) write(stem + ".annotations.json", format_annotations(st.story_annotations[i]));
    }
    return st;
  }

  void walls(const TriangleMesh& story, const std::string& stem) {
    const WallsStage st = stage("walls", [&] { return run_walls(story, config_); });
    warn(st.walls.directions.warnings);
    write(stem + ".walls.obj", format_mesh(st.walls.mesh, config_));
    write(stem + ".walls.json", format_walls_report(st, config_));
  }

  void plan(TriangleMesh mesh, AnnotationSet annotations, PlanStyle style, const std::string& stem) {
    if (!is_oriented(mesh)) {
      note("input mesh has not been oriented; orienting first");
      OrientStage o = stage("orient", [&] { return run_orient(std::move(mesh), std::move(annotations), config_); });
      warn(o.report.warnings);
      mesh = std::move(o.mesh);
      annotations = std::move(o.annotations);
    }
    const std::string name = style == PlanStyle::kDrafting ? "drafting" : "pen";
    std::string svg;
    const PlanStage st = stage(name.c_str(), [&] {
      PlanStage s = run_plan(mesh, annotations, style, config_);
      svg = format_plan_svg(s, style, config_);
      return s;
    });
    write(stem + "." + name + ".svg", svg);
    write(stem + "." + name + ".layers.json", format_plan_layers(st, config_));
  }

 private:
  const PipelineConfig& config_;
  fs::path out_;
  std::ostream& err_;
};

// The pipeline feeds each step exactly what the step's file holds, so running
// the subcommands one by one on those files reproduces its artifacts.
TriangleMesh reload(const TriangleMesh& mesh, const PipelineConfig& config) {
  return parse_obj(format_mesh(mesh, config));
}

AnnotationSet reload(const AnnotationSet& annotations) {
  return parse_annotations(format_annotations(annotations));
}

BuildingSpec load_spec(const std::string& preset, const std::string& spec_path) {
  if (!preset.empty()) return preset_spec(preset);
  return parse_building_spec(read_text(spec_path));
}

std::string stem_of(const std::string& path) { return fs::path(path).stem().string(); }

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Axis-aligned models and floor plans from indoor triangle-mesh scans", "floorscan"};
  app.require_subcommand(1);

  Settings settings;
  std::string input, annotations_path, style = "pen", preset, spec_path, report_path;
  std::optional<std::uint64_t> seed;
  bool timings = false;

  auto mesh_command = [&](const char* name, const char* help) {
    CLI::App* cmd = app.add_subcommand(name, help);
    cmd->add_option("input", input, "input mesh (OBJ or PLY)")->required();
    cmd->add_option("-a,--annotations", annotations_path, "annotation JSON sidecar");
    settings.attach(cmd);
    return cmd;
  };
  CLI::App* orient_cmd = mesh_command("orient", "level the floor and align walls with the axes");
  CLI::App* levels_cmd = mesh_command("levels", "detect floors and ceilings and split stories");
  CLI::App* walls_cmd = mesh_command("walls", "extract planar walls from one story");
  CLI::App* plan_cmd = mesh_command("plan", "draw a floor plan of one story");
  plan_cmd->add_option("--style", style, "pen or drafting")->check(CLI::IsMember({"pen", "drafting"}));
  CLI::App* pipeline_cmd = mesh_command("pipeline", "run every stage in order");

  CLI::App* synth_cmd = app.add_subcommand("synth", "generate a synthetic building with ground truth");
  CLI::App* eval_cmd = app.add_subcommand("eval", "run the pipeline on a synthetic building and score it");
  for (CLI::App* cmd : {synth_cmd, eval_cmd}) {
    auto* group = cmd->add_option_group("building");
    group->add_option("--preset", preset, "named layout")->check(CLI::IsMember(preset_names()));
    group->add_option("--spec", spec_path, "building spec JSON");
    group->require_option(1);
    cmd->add_option("--seed", seed, "override the building seed");
  }
  settings.attach(synth_cmd);
  eval_cmd->add_option("-c,--config", settings.config_path, "key = value configuration file");
  eval_cmd->add_option("--set", settings.overrides, "override one setting, key=value (repeatable)");
  eval_cmd->add_option("-o,--out", report_path, "report file (default: stdout)");
  eval_cmd->add_flag("--timings", timings, "include stage timings in the report");

  CLI::App* measure_cmd = app.add_subcommand("measure", "area error of room polygons against actual areas");
  measure_cmd->add_option("rooms", input, "JSON array of {label, actual_area_m2, polygon}")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "error: " << e.what() << "\n\n";
    const auto chosen = app.get_subcommands();
    err << (chosen.empty() ? app.help() : chosen.front()->help());
    return kExitUsage;
  }

  try {
    const PipelineConfig config = settings.load();

    if (*measure_cmd) {
      const auto rows = measure_report(parse_room_polygons(read_text(input)));
      out << format_measurements(rows);
      return kExitOk;
    }
    if (*synth_cmd || *eval_cmd) {
      BuildingSpec spec = load_spec(preset, spec_path);
      if (seed) spec.seed = *seed;
      if (*eval_cmd) {
        const std::string text = format_eval_report(evaluate(spec, config), timings);
        if (report_path.empty()) out << text;
        else write_text(report_path, text);
        return kExitOk;
      }
      Session session(config, settings.out_dir, err);
      const SyntheticBuilding b = session.stage("synth", [&] { return generate(spec); });
      session.write("building.obj", format_mesh(b.mesh, config));
      session.write("building.annotations.json", format_annotations(b.annotations));
      session.write("truth.json", format_ground_truth(b.truth));
      session.write("spec.json", format_building_spec(spec));
      return kExitOk;
    }

    Session session(config, settings.out_dir, err);
    TriangleMesh mesh = session.load_mesh_file(input);
    const bool with_annotations = !annotations_path.empty();
    AnnotationSet annotations = with_annotations ? load_annotations(annotations_path) : AnnotationSet{};

    if (*orient_cmd) {
      session.orient(std::move(mesh), std::move(annotations), with_annotations);
    } else if (*levels_cmd) {
      session.levels(mesh, annotations, with_annotations);
    } else if (*walls_cmd) {
      session.walls(mesh, stem_of(input));
    } else if (*plan_cmd) {
      session.plan(std::move(mesh), std::move(annotations),
                   style == "drafting" ? PlanStyle::kDrafting : PlanStyle::kPenAndInk, stem_of(input));
    } else if (*pipeline_cmd) {
      const OrientStage o = session.orient(std::move(mesh), std::move(annotations), with_annotations);
      const LevelsStage lv = session.levels(reload(o.mesh, config),
                                            with_annotations ? reload(o.annotations) : AnnotationSet{},
                                            with_annotations);
      for (std::size_t i = 0; i < lv.story_meshes.size(); ++i) {
        const std::string stem = "story_" + std::to_string(i);
        const TriangleMesh story = reload(lv.story_meshes[i], config);
        const AnnotationSet story_ann =
            with_annotations ? reload(lv.story_annotations[i]) : AnnotationSet{};
        session.walls(story, stem);
        session.plan(story, story_ann, PlanStyle::kPenAndInk, stem);
        session.plan(story, story_ann, PlanStyle::kDrafting, stem);
      }
    }
    return kExitOk;
  } catch (const StageError& e) {
    err << "error in stage " << e.what() << "\n";
    return kExitStage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::kInvalidArgument ? kExitUsage : kExitInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
}

}  // namespace floorscan
