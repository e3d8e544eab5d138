#include <array>
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "neurogate/intent/history.hpp"
#include "neurogate/intent/posterior.hpp"
#include "neurogate/intent/stream_io.hpp"

using namespace neurogate::intent;

TEST_CASE("posterior validation") {
  CHECK_NOTHROW(IntentPosterior({0.25, 0.25, 0.25, 0.25}));
  CHECK_THROWS_AS(IntentPosterior({0.5, 0.5, 0.5, -0.5}), std::invalid_argument);
  CHECK_THROWS_AS(IntentPosterior({0.5, 0.5, 0.5, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(IntentPosterior({0.25, 0.25, 0.25, std::nan("")}), std::invalid_argument);

  // a sum within 1e-6 of one is accepted and renormalized
  const IntentPosterior p({0.7, 0.1, 0.1, 0.1 + 5e-7});
  double sum = 0.0;
  for (double v : p.probs()) sum += v;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));

  const IntentPosterior uniform;
  CHECK(uniform.probs() == std::array<double, 4>{0.25, 0.25, 0.25, 0.25});
}

TEST_CASE("argmax resolves ties to the lowest index") {
  CHECK(argmax_lowest({0.4, 0.4, 0.1, 0.1}) == Action::Grasp);
  CHECK(argmax_lowest({0.1, 0.4, 0.4, 0.1}) == Action::Release);
  CHECK(argmax_lowest({0.25, 0.25, 0.25, 0.25}) == Action::Grasp);
  CHECK(IntentPosterior({0.1, 0.1, 0.1, 0.7}).argmax() == Action::Rotate);
  CHECK(IntentPosterior({0.1, 0.1, 0.1, 0.7}).max_prob() == 0.7);
}

TEST_CASE("action names round trip") {
  for (int i = 0; i < kNumActions; ++i) {
    const auto a = Action(i);
    const auto back = action_from_string(to_string(a));
    REQUIRE(back.has_value());
    CHECK(*back == a);
  }
  CHECK(!action_from_string("WAVE").has_value());
}

TEST_CASE("calibration mixes toward uniform") {
  const IntentPosterior one_hot({1.0, 0.0, 0.0, 0.0});

  SUBCASE("alpha 0.8 on a one-hot posterior") {
    const auto q = calibrate(one_hot, 0.8);
    CHECK(std::abs(q.p[0] - 0.85) <= 1e-12);
    CHECK(std::abs(q.p[1] - 0.05) <= 1e-12);
    CHECK(std::abs(q.p[2] - 0.05) <= 1e-12);
    CHECK(std::abs(q.p[3] - 0.05) <= 1e-12);
    CHECK(q.alpha == 0.8);
    CHECK(q.argmax() == Action::Grasp);
    CHECK(q.max_prob() == doctest::Approx(0.85).epsilon(1e-15));
  }

  SUBCASE("alpha endpoints") {
    CHECK(calibrate(one_hot, 1.0).p == one_hot.probs());
    const auto flat = calibrate(one_hot, 0.0);
    for (double v : flat.p) CHECK(v == doctest::Approx(0.25).epsilon(1e-15));
  }

  SUBCASE("alpha outside [0, 1] throws") {
    CHECK_THROWS_AS(calibrate(one_hot, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(calibrate(one_hot, 1.1), std::invalid_argument);
  }
}

TEST_CASE("normalized entropy") {
  const auto entropy = [](std::array<double, 4> p) { return normalized_entropy(p); };
  CHECK(entropy({0.25, 0.25, 0.25, 0.25}) == 1.0);
  CHECK(entropy({1.0, 0.0, 0.0, 0.0}) == 0.0);
  CHECK(entropy({0.0, 0.0, 1.0, 0.0}) == 0.0);

  // frozen reference values for the two calibrated shapes the gate sees most
  CHECK(entropy({0.85, 0.05, 0.05, 0.05}) ==
        doctest::Approx(0.4237923399122869254).epsilon(1e-14));
  CHECK(entropy({0.826, 0.058, 0.058, 0.058}) ==
        doctest::Approx(0.4712786335587138110).epsilon(1e-14));

  // symmetric in its arguments up to summation order
  CHECK(entropy({0.1, 0.2, 0.3, 0.4}) ==
        doctest::Approx(entropy({0.4, 0.3, 0.2, 0.1})).epsilon(1e-15));
}

namespace {

CalibratedPosterior confident(Action a, double c = 0.9) {
  std::array<double, 4> p{};
  p.fill((1.0 - c) / 3.0);
  p[std::size_t(a)] = c;
  return CalibratedPosterior{p, 1.0};
}

}  // namespace

TEST_CASE("intent history oscillation index") {
  CHECK_THROWS_AS(IntentHistory(1), std::invalid_argument);

  IntentHistory h(10);
  CHECK(h.capacity() == 10);

  SUBCASE("zero until full") {
    for (int i = 0; i < 9; ++i) {
      h.push_label(i % 2 ? Action::Grasp : Action::Release);
      CHECK(h.oscillation_index() == 0.0);
    }
    h.push_label(Action::Grasp);
    CHECK(h.full());
    CHECK(h.oscillation_index() == 1.0);
  }

  SUBCASE("constant labels give zero") {
    for (int i = 0; i < 10; ++i) h.push_frame(confident(Action::MoveTo));
    CHECK(h.oscillation_index() == 0.0);
  }

  SUBCASE("three flips in ten frames") {
    // G G G R R G G G G M : flips at 3 positions
    const Action seq[10] = {Action::Grasp, Action::Grasp,  Action::Grasp, Action::Release,
                            Action::Release, Action::Grasp, Action::Grasp, Action::Grasp,
                            Action::Grasp, Action::MoveTo};
    for (Action a : seq) h.push_label(a);
    CHECK(h.oscillation_index() == 3.0 / 9.0);
  }

  SUBCASE("window slides") {
    for (int i = 0; i < 10; ++i) h.push_label(Action::Grasp);
    CHECK(h.oscillation_index() == 0.0);
    h.push_label(Action::Rotate);  // evicts one Grasp, introduces one flip
    CHECK(h.size() == 10);
    CHECK(h.label_at(9) == Action::Rotate);
    CHECK(h.label_at(0) == Action::Grasp);
    CHECK(h.oscillation_index() == 1.0 / 9.0);
  }

  SUBCASE("only the argmax matters, not the confidence") {
    IntentHistory a(4), b(4);
    const Action seq[4] = {Action::Grasp, Action::Rotate, Action::Grasp, Action::Grasp};
    for (Action x : seq) {
      a.push_frame(confident(x, 0.9));
      b.push_frame(confident(x, 0.4));
    }
    CHECK(a.oscillation_index() == b.oscillation_index());
  }
}

TEST_CASE("posterior stream parsing") {
  const std::string text =
      "# posterior stream v1 columns=frame,p_grasp,p_release,p_move_to,p_rotate,label\n"
      "0,0.85,0.05,0.05,0.05,GRASP\n"
      "1,0.1,0.7,0.1,0.1,\n"
      "not a record\n"
      "2,0.5,0.5,0.5,0.5,ROTATE\n"
      "3,0.25,0.25,0.25,0.25,ROTATE\n";
  const auto stream = parse_posterior_stream(text);
  REQUIRE(stream.records.size() == 3);
  CHECK(stream.records[0].frame == 0);
  CHECK(stream.records[0].p[0] == 0.85);
  REQUIRE(stream.records[0].label.has_value());
  CHECK(*stream.records[0].label == Action::Grasp);
  CHECK(!stream.records[1].label.has_value());
  CHECK(stream.records[2].frame == 3);

  REQUIRE(stream.rejected.size() == 2);
  CHECK(stream.rejected[0].line == 4);
  CHECK(stream.rejected[1].line == 5);  // probabilities do not sum to one
}

TEST_CASE("posterior stream round trip") {
  std::vector<PosteriorRecord> recs;
  recs.push_back({0, {0.85, 0.05, 0.05, 0.05}, Action::Grasp});
  recs.push_back({1, {0.1, 0.2, 0.3, 0.4}, std::nullopt});

  const std::string text = format_posterior_stream(recs);
  const auto back = parse_posterior_stream(text);
  REQUIRE(back.records.size() == 2);
  CHECK(back.rejected.empty());
  CHECK(back.records[0].p == recs[0].p);
  CHECK(back.records[1].p == recs[1].p);
  CHECK(back.records[0].label == recs[0].label);
  CHECK(!back.records[1].label.has_value());
  CHECK(format_posterior_stream(back.records) == text);

  const std::string path = "/tmp/neurogate_test_stream.csv";
  write_posterior_stream(path, recs);
  const auto file = read_posterior_stream(path);
  CHECK(file.records.size() == 2);
  CHECK_THROWS_AS(read_posterior_stream("/nonexistent/stream.csv"), std::runtime_error);
}
