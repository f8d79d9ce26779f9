#include <doctest.h>

#include <sstream>

#include "helpers.hpp"
#include "mspseg/dataio.hpp"
#include "mspseg/errors.hpp"

using namespace mspseg;
using testutil::scratch;

TEST_CASE("lgm round trip is byte exact") {
    LabelGrid g(3, 2);
    g.values = {0, 1, 2, 30, 4, 5};
    std::ostringstream out;
    write_lgm(out, g);
    CHECK(out.str() == "LGM 3 2\n0 1 2\n30 4 5\n");
    std::istringstream in(out.str());
    CHECK(read_lgm(in, "g.lgm") == g);
}

TEST_CASE("fgm round trip keeps 9 significant digits") {
    FloatGrid g(2, 1, 2);
    g.values = {0.123456789012, -3.5, 1e-12, 7.0};
    std::ostringstream out;
    write_fgm(out, g);
    std::istringstream in(out.str());
    const FloatGrid back = read_fgm(in, "g.fgm");
    std::ostringstream again;
    write_fgm(again, back);
    CHECK(again.str() == out.str());
    CHECK(back.values[0] == doctest::Approx(0.123456789).epsilon(1e-12));
    CHECK(format_real(-0.0) == "0");
}

TEST_CASE("lgm with too few values names the file and the count") {
    std::istringstream in("LGM 4 3\n0 0 0 0\n0 0 0 0\n0 0 0\n");
    try {
        read_lgm(in, "sp_0001.lgm");
        FAIL("expected an error");
    } catch (const FormatError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("sp_0001.lgm") != std::string::npos);
        CHECK(msg.find("expected 12 values") != std::string::npos);
    }
}

TEST_CASE("malformed headers are rejected") {
    std::istringstream a("LGX 4 3\n");
    CHECK_THROWS_AS(read_lgm(a, "a.lgm"), FormatError);
    std::istringstream b("FGM 2 2\n");
    CHECK_THROWS_AS(read_fgm(b, "b.fgm"), FormatError);
    std::istringstream c("LGM 2 1\n0 -1\n");
    CHECK_THROWS_AS(read_lgm(c, "c.lgm"), FormatError);
    std::istringstream d("DSC 2\n0 0 0 1.0\n");
    CHECK_THROWS_AS(read_dsc(d, "d.dsc"), FormatError);
}

TEST_CASE("trajectory out of bounds names the line") {
    std::istringstream in("7 0 0 0\n7 1 99 0\n");
    try {
        read_trj(in, "traj.trj", TrajectoryBounds{2, 4, 3});
        FAIL("expected an error");
    } catch (const FormatError& e) {
        CHECK(e.line() == 2);
        CHECK(std::string(e.what()).find("traj.trj") != std::string::npos);
    }
}

TEST_CASE("trajectory frames must increase") {
    std::istringstream in("1 1 0 0\n1 0 0 0\n");
    CHECK_THROWS_AS(read_trj(in, "t.trj"), FormatError);
}

TEST_CASE("dataset save and load round trip") {
    const auto dir = scratch("dataio_roundtrip");
    const VideoDataset ds = testutil::tiny_dataset();
    save_dataset(ds, dir);
    const VideoDataset back = load_dataset(dir);
    CHECK(back.frames() == 2);
    CHECK(back.width() == 4);
    CHECK(back.height() == 3);
    CHECK(back == ds);
}

TEST_CASE("dataset without gt has no annotators") {
    const auto dir = scratch("dataio_nogt");
    VideoDataset ds = testutil::tiny_dataset();
    ds.groundtruth.clear();
    save_dataset(ds, dir);
    CHECK(load_dataset(dir).groundtruth.empty());
}

TEST_CASE("dataset load reports the broken file") {
    const auto dir = scratch("dataio_broken");
    save_dataset(testutil::tiny_dataset(), dir);
    testutil::spit(dir / "sp_0001.lgm", "LGM 4 3\n0 0 1 1\n0 0 1 1\n0 0 1\n");
    try {
        load_dataset(dir);
        FAIL("expected an error");
    } catch (const InputError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("sp_0001.lgm") != std::string::npos);
        CHECK(msg.find("expected 12 values") != std::string::npos);
    }
}

TEST_CASE("dataset load checks trajectory bounds") {
    const auto dir = scratch("dataio_trj");
    save_dataset(testutil::tiny_dataset(), dir);
    testutil::spit(dir / "traj.trj", "7 1 99 0\n");
    CHECK_THROWS_AS(load_dataset(dir), FormatError);
}

TEST_CASE("dataset load rejects mismatched frame sizes") {
    const auto dir = scratch("dataio_dims");
    save_dataset(testutil::tiny_dataset(), dir);
    testutil::spit(dir / "tsl_0001.lgm", "LGM 2 1\n0 0\n");
    CHECK_THROWS_AS(load_dataset(dir), InputError);
}

TEST_CASE("contour values must lie in [0,1]") {
    VideoDataset ds = testutil::tiny_dataset();
    ds.contour[0].values[0] = 1.5;
    CHECK_THROWS_AS(validate_dataset(ds), InputError);
}

TEST_CASE("missing directory names the path") {
    try {
        load_dataset("/nonexistent/video");
        FAIL("expected an error");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find("/nonexistent/video") != std::string::npos);
    }
}

TEST_CASE("layout file names") {
    CHECK(frame_file("sp", 7, "lgm") == "sp_0007.lgm");
    CHECK(gt_file(2, 40) == "a02_f0040.lgm");
}
