#include <doctest.h>

#include "floorscan/error.hpp"
#include "floorscan/evaluate.hpp"
#include "floorscan/pipeline.hpp"
#include "floorscan/synth.hpp"

using namespace floorscan;

TEST_CASE("default configuration carries the reference parameter values") {
  const PipelineConfig c;
  CHECK(c.seed == 42);
  CHECK(c.bucket_size == 0.0508);  // 2 in
  CHECK(c.wall_schedule.angles_deg == std::vector<double>{50, 40, 30, 20, 10, 5, 3});
  CHECK(c.walls.block.h == doctest::Approx(8 * 0.3048));
  CHECK(c.walls.block.w == doctest::Approx(8 * 0.0254));
  CHECK(c.walls.block.l == doctest::Approx(1.5 * 0.3048));
  CHECK(c.opacity == 0.5);
  CHECK(c.slices == 100);
}

TEST_CASE("config text round-trips and reports bad lines") {
  PipelineConfig c;
  c.merge_text("# comment\nseed = 7\n\nwalls.directions = kmeans  # trailing\nplan.slices=12\n"
               "orient.wall_schedule = 40, 20, 5\n");
  CHECK(c.seed == 7);
  CHECK(c.walls.source == DirectionSource::kKMeans);
  CHECK(c.slices == 12);
  CHECK(c.wall_schedule.angles_deg == std::vector<double>{40, 20, 5});

  PipelineConfig back;
  back.merge_text(c.to_text());
  CHECK(back.to_text() == c.to_text());
  CHECK(PipelineConfig::keys().size() == c.entries().size());

  for (const char* bad : {"seed = 7\nnonsense\n", "seed = 7\nbogus.key = 1\n", "seed = 7\nplan.slices = 0\n",
                          "seed = 7\norient.wall_schedule = 5, 10\n"}) {
    try {
      PipelineConfig x;
      x.merge_text(bad);
      FAIL("expected a parse error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kParse);
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
  }
}

TEST_CASE("orientation marks the mesh and levels split it") {
  const auto b = generate(preset_spec("two_story"));
  const PipelineConfig config;
  CHECK_FALSE(is_oriented(b.mesh));
  const OrientStage o = run_orient(b.mesh, b.annotations, config);
  CHECK(is_oriented(o.mesh));
  CHECK(o.annotations.size() == b.annotations.size());
  const LevelsStage lv = run_levels(o.mesh, o.annotations, config);
  CHECK(lv.story_meshes.size() == 2);
  std::size_t ann = 0;
  for (const auto& s : lv.story_annotations) ann += s.size();
  CHECK(ann == b.annotations.size());
  for (const auto& s : lv.story_meshes) CHECK(is_oriented(s));
}

TEST_CASE("every artifact records the configuration") {
  const auto b = generate(preset_spec("single_room"));
  PipelineConfig config;
  config.set("plan.slices", "20");
  const auto o = run_orient(b.mesh, b.annotations, config);
  const auto lv = run_levels(o.mesh, o.annotations, config);
  const auto w = run_walls(lv.story_meshes[0], config);
  const auto p = run_plan(lv.story_meshes[0], lv.story_annotations[0], PlanStyle::kPenAndInk, config);
  for (const std::string& text :
       {format_orientation_report(o.report, config), format_levels_report(lv, config),
        format_walls_report(w, config), format_plan_layers(p, config)}) {
    CHECK(text.find("\"plan.slices\": \"20\"") != std::string::npos);
  }
  CHECK(format_plan_svg(p, PlanStyle::kPenAndInk, config).find("config plan.slices = 20") != std::string::npos);
  CHECK(format_mesh(w.walls.mesh, config).find("# config plan.slices = 20") != std::string::npos);
}

TEST_CASE("evaluation of a clean building is exact") {
  const EvalReport r = evaluate(preset_spec("office"), PipelineConfig{});
  CHECK(r.floor_normal_error_deg < 1e-6);
  CHECK(r.yaw_error_deg < 1e-6);
  CHECK(r.detected_story_count == 1);
  CHECK(r.walls.recall() == 1.0);
  CHECK(r.walls.precision() == 1.0);
  for (const auto& room : r.rooms) {
    REQUIRE(room.error_percent.has_value());
    CHECK(std::fabs(*room.error_percent) < 1e-6);
  }
  CHECK(format_eval_report(r, false).find("timings") == std::string::npos);
}
