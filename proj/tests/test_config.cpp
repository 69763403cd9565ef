#include <gtest/gtest.h>

#include "fbmb/config.hpp"

using namespace fbmb;

TEST(Config, EmptyTextGivesDefaults) {
  EXPECT_EQ(serialize_config(parse_config_text("")), serialize_config(RunConfig{}));
  const RunConfig c = parse_config_text("");
  EXPECT_EQ(c.trial.world.size, 64);
  EXPECT_EQ(c.trial.steps, 512);
  EXPECT_EQ(c.tournament_size, 5u);
  EXPECT_EQ(c.initial_length, 5000u);
  EXPECT_DOUBLE_EQ(c.mutation.point_rate, 0.003);
}

TEST(Config, RoundTripIsExact) {
  RunConfig c;
  c.seed = 123456789012345ULL;
  c.population = 37;
  c.trial.world.wall_probability = 0.1 + 0.2;  // not exactly representable in short decimal
  c.mutation.point_rate = 1.0 / 3.0;
  c.gates = GateKindSet::parse("dp");
  c.analysis_stride = 7;
  const RunConfig back = parse_config_text(serialize_config(c));
  EXPECT_EQ(serialize_config(back), serialize_config(c));
  EXPECT_EQ(back.trial.world.wall_probability, c.trial.world.wall_probability);
  EXPECT_EQ(back.mutation.point_rate, c.mutation.point_rate);
  EXPECT_EQ(back.seed, c.seed);
  EXPECT_EQ(back.gates, c.gates);
}

TEST(Config, FractionsAndCommentsAreAccepted) {
  const RunConfig c = parse_config_text(
      "# comment\n"
      "; another\n"
      "[world]\n"
      "wall_probability = 1/7\n"
      "size = 32\n"
      "start_distance = 16\n"
      "[evolution]\n"
      "gates = d\n");
  EXPECT_DOUBLE_EQ(c.trial.world.wall_probability, 1.0 / 7.0);
  EXPECT_EQ(c.trial.world.size, 32);
  EXPECT_EQ(c.gates, GateKindSet::parse("d"));
}

TEST(Config, ErrorsAreReported) {
  EXPECT_THROW(parse_config_text("[world]\nbogus = 1\n"), ConfigError);
  EXPECT_THROW(parse_config_text("[nowhere]\nsize = 1\n"), ConfigError);
  EXPECT_THROW(parse_config_text("[world]\nsize = big\n"), ConfigError);
  EXPECT_THROW(parse_config_text("[world]\nwall_probability = 1/0\n"), ConfigError);
  EXPECT_THROW(parse_config_text("[world]\nwall_probability = 1.5\n"), ConfigError);
  EXPECT_THROW(parse_config_text("[evolution]\ngates = x\n"), ConfigError);
  EXPECT_THROW(parse_config_text("[evolution]\npopulation = 3\n"), ConfigError);  // below tournament size
  EXPECT_THROW(parse_config_text("size = 3\n"), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/config.ini"), ConfigError);
}

TEST(Config, ReferenceListsEveryKey) {
  const std::string ref = config_reference();
  for (const char* key : {"genome.point_rate", "world.size", "evolution.population", "evolution.gates",
                          "analysis.repeats", "analysis.lod_stride"}) {
    EXPECT_NE(ref.find(key), std::string::npos) << key;
  }
}
