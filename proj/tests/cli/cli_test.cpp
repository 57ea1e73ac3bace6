#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <filesystem>
#include <fstream>

#include "softslides/deck.hpp"
#include "softslides/framing.hpp"
#include "softslides/trace.hpp"
#include "test_worlds.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("softslides-cli-" + std::to_string(::getpid()) + "-" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  Result run(const std::string& args) const {
    const std::string out = path("stdout.txt");
    const std::string err = path("stderr.txt");
    const int status = std::system((std::string(SOFTSLIDES_CLI) + " " + args + " >" + out + " 2>" + err).c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, testing_support::slurp(out), testing_support::slurp(err)};
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, RunZeroTicksWritesOneFrame) {
  const auto r = run("run --deck " + std::string(SOFTSLIDES_SHIPPED_DECK_PATH) + " --slide sim1d --ticks 0 --out " +
                     path("t.trace"));
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string bytes = testing_support::slurp(path("t.trace"));
  EXPECT_EQ(bytes, slides::harness::run_trace(slides::default_deck_text(), "sim1d", 0));
}

TEST_F(Cli, RunIsByteIdenticalAndVerifies) {
  const std::string args = " --slide 6 --ticks 200 --out ";
  ASSERT_EQ(run("run" + args + path("a.trace")).code, 0);
  ASSERT_EQ(run("run" + args + path("b.trace")).code, 0);
  EXPECT_EQ(testing_support::slurp(path("a.trace")), testing_support::slurp(path("b.trace")));
  const auto v = run("verify --trace " + path("a.trace") + " --deck " + SOFTSLIDES_SHIPPED_DECK_PATH);
  EXPECT_EQ(v.code, 0) << v.err;
  EXPECT_NE(v.out.find("verified 201 frames"), std::string::npos);
}

TEST_F(Cli, UnknownSlideNamed) {
  const auto r = run("run --slide no-such-id --ticks 1 --out " + path("x.trace"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("no-such-id"), std::string::npos);
}

TEST_F(Cli, ConfigErrorsExitTwo) {
  EXPECT_EQ(run("run --ticks 1").code, 2);
  EXPECT_EQ(run("run --ticks -1 --out " + path("x")).code, 2);
  EXPECT_EQ(run("run --deck /nonexistent --ticks 1 --out " + path("x")).code, 2);
  EXPECT_EQ(run("bogus").code, 2);
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("verify --trace /nonexistent").code, 2);
  std::ofstream(path("bad.deck")) << "slide a text\nintegrator: RK5\n";
  const auto r = run("run --deck " + path("bad.deck") + " --ticks 1 --out " + path("x"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("line 2"), std::string::npos);
}

TEST_F(Cli, VerifyMismatchExitsThreeWithTick) {
  ASSERT_EQ(run("run --slide sim2d --ticks 20 --out " + path("a.trace")).code, 0);
  std::string bytes = testing_support::slurp(path("a.trace"));
  const auto at = bytes.find("{\"tick\":12,");
  ASSERT_NE(at, std::string::npos);
  const auto pos = bytes.find("\"positions\":[", at) + 13;
  bytes[pos] = bytes[pos] == '1' ? '2' : '1';
  std::ofstream(path("b.trace"), std::ios::binary) << bytes;
  const auto r = run("verify --trace " + path("b.trace"));
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("tick 12"), std::string::npos);
}

TEST_F(Cli, VerifyAgainstOtherDeckDivergesAtZero) {
  ASSERT_EQ(run("run --slide sim2d --ticks 5 --out " + path("a.trace")).code, 0);
  std::ofstream(path("other.deck")) << slides::default_deck_text() << "# edited\n";
  const auto r = run("verify --trace " + path("a.trace") + " --deck " + path("other.deck"));
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("tick 0"), std::string::npos);
}

TEST_F(Cli, CompareIntegratorsCsv) {
  const auto r = run("compare-integrators --system oscillator --grid h=1/60,1/120,1/240 --out " + path("t.csv"));
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string csv = testing_support::slurp(path("t.csv"));
  EXPECT_EQ(csv.rfind("integrator,h,max_error_m,seconds_per_10k_steps,derivative_evaluations\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 13);

  const auto ff = run("compare-integrators --system freefall --grid h=1/60 --integrators midpoint,rk4");
  ASSERT_EQ(ff.code, 0);
  EXPECT_EQ(std::count(ff.out.begin(), ff.out.end(), '\n'), 3);
}

TEST_F(Cli, CompareIntegratorsRejectsUnknownSystem) {
  EXPECT_EQ(run("compare-integrators --system pendulum").code, 2);
  EXPECT_EQ(run("compare-integrators --system oscillator --grid h=abc").code, 2);
  EXPECT_EQ(run("compare-integrators --system oscillator --integrators rk5").code, 2);
}

TEST_F(Cli, NumericFaultExitsFour) {
  std::ofstream(path("stiff.deck")) << "slide boom sim\n"
                                       "title: boom\n"
                                       "integrator: euler\n"
                                       "params: timestep=1\n"
                                       "body: 2d n=8 k_structural=1e300 k_radial=1e300 k_shear=1e300\n";
  const auto r = run("run --deck " + path("stiff.deck") + " --ticks 50 --out " + path("x.trace"));
  EXPECT_EQ(r.code, 4) << r.err;
  EXPECT_NE(r.err.find("fault"), std::string::npos);
}

TEST_F(Cli, ServeStdioWithRecording) {
  // One command on stdin, then EOF: the session ends once stdin closes.
  std::string in = slides::protocol::frame_message(
      {slides::protocol::MessageType::Command, R"({"type":"set_integrator","name":"midpoint"})"});
  std::ofstream(path("in.bin"), std::ios::binary) << in;
  const auto r = run("serve --stdio --slide sim3d --tick-ms 0 --ticks 10 --record " + path("rec.trace") + " < " +
                     path("in.bin"));
  ASSERT_EQ(r.code, 0) << r.err;
  slides::protocol::MessageReader reader;
  reader.feed(r.out);
  int frames = 0;
  while (auto m = reader.next()) frames += m->type == slides::protocol::MessageType::Frame;
  EXPECT_GE(frames, 1);
  const auto v = run("verify --trace " + path("rec.trace"));
  EXPECT_EQ(v.code, 0) << v.err;
}

TEST_F(Cli, ListShowsFifteenSlides) {
  const auto r = run("list");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 15);
}
