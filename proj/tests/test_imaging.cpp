#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "doctest.h"
#include "fsi/image.hpp"
#include "fsi/metrics.hpp"
#include "support/synthetic.hpp"
#include "support/tempdir.hpp"

using namespace fsi;

TEST_CASE("Image construction validates dimensions") {
    CHECK_THROWS_AS(Image(0, 4), std::invalid_argument);
    CHECK_THROWS_AS(Image(4, -1), std::invalid_argument);
    const Image img(3, 2, 7.0);
    CHECK(img.pixel_count() == 6);
    CHECK(img.at(2, 1) == 7.0);
}

TEST_CASE("P2 decode of a 2x2 image") {
    std::istringstream in("P2\n2 2\n255\n0 255 255 0\n");
    const Image img = parse_pgm(in);
    CHECK(img.width == 2);
    CHECK(img.height == 2);
    CHECK(img.data == std::vector<double>{0.0, 255.0, 255.0, 0.0});
}

TEST_CASE("P2 with header comments and odd spacing") {
    std::istringstream in("P2 # magic\n# a comment line\n 2\t1 # dims\n255\n12 200");
    const Image img = parse_pgm(in);
    CHECK(img.width == 2);
    CHECK(img.height == 1);
    CHECK(img.data == std::vector<double>{12.0, 200.0});
}

TEST_CASE("P5 binary decode") {
    std::string raw = "P5\n3 1\n255\n";
    raw.push_back('\x00');
    raw.push_back('\x7f');
    raw.push_back('\xff');
    std::istringstream in(raw);
    const Image img = parse_pgm(in);
    CHECK(img.data == std::vector<double>{0.0, 127.0, 255.0});
}

TEST_CASE("PGM parse failures are distinct and typed") {
    auto parse = [](const std::string& text) {
        std::istringstream in(text);
        return parse_pgm(in);
    };
    CHECK_THROWS_WITH_AS(parse("P6\n2 2\n255\n"), doctest::Contains("unsupported magic"),
                         PgmError);
    CHECK_THROWS_WITH_AS(parse("P5\n2 2\n65535\n"), doctest::Contains("unsupported maxval"),
                         PgmError);
    CHECK_THROWS_AS(parse(""), PgmError);                        // empty file
    CHECK_THROWS_WITH_AS(parse("P5\n2\n"), doctest::Contains("truncated"), PgmError);
    CHECK_THROWS_WITH_AS(parse("P5\n2 x\n255\n"), doctest::Contains("malformed header"),
                         PgmError);
    CHECK_THROWS_WITH_AS(parse("P5\n2 2\n255\nab"), doctest::Contains("truncated pixel data"),
                         PgmError);
    CHECK_THROWS_WITH_AS(parse("P2\n2 1\n255\n4 256\n"), doctest::Contains("out of range"),
                         PgmError);
    CHECK_THROWS_WITH_AS(parse("P2\n2 1\n255\n4 -3\n"), doctest::Contains("out of range"),
                         PgmError);
    CHECK_THROWS_AS(parse("P2\n2 1\n255\n4\n"), PgmError);       // short sample list
    CHECK_THROWS_WITH_AS(parse("P2\n0 2\n255\n"), doctest::Contains("malformed header"),
                         PgmError);
}

TEST_CASE("writer clips and rounds half-up") {
    Image img(4, 1);
    img.data = {127.6, -3.0, 255.0, 254.5};
    std::ostringstream out;
    write_pgm(img, out);
    const std::string text = out.str();
    const std::string header = "P5\n4 1\n255\n";
    REQUIRE(text.size() == header.size() + 4);
    CHECK(text.substr(0, header.size()) == header);
    CHECK(static_cast<unsigned char>(text[header.size() + 0]) == 128);
    CHECK(static_cast<unsigned char>(text[header.size() + 1]) == 0);
    CHECK(static_cast<unsigned char>(text[header.size() + 2]) == 255);
    CHECK(static_cast<unsigned char>(text[header.size() + 3]) == 255);
}

TEST_CASE("round-trip: integer image is preserved exactly") {
    const Image img = synth::random_image(9, 5, 42);
    std::stringstream buf;
    write_pgm(img, buf);
    const Image back = parse_pgm(buf);
    REQUIRE(back.same_shape(img));
    CHECK(back.data == img.data);
}

TEST_CASE("round-trip: arbitrary in-range values within half a quantum") {
    Image img(16, 16);
    for (std::size_t i = 0; i < img.data.size(); ++i)
        img.data[i] = 255.0 * (static_cast<double>(i) / (img.data.size() - 1));
    std::stringstream buf;
    write_pgm(img, buf);
    const Image back = parse_pgm(buf);
    for (std::size_t i = 0; i < img.data.size(); ++i)
        CHECK(std::abs(back.data[i] - img.data[i]) <= 0.5);
}

TEST_CASE("file save/load round-trip and error paths") {
    testutil::TempDir dir("fsi-imaging");
    const Image img = synth::natural_scene(12, 12);
    const auto path = dir.file("scene.pgm");
    save_image(img, path);
    const Image back = load_image(path);
    CHECK(back.data == img.data);

    CHECK_THROWS_AS(load_image(dir.file("missing.pgm")), std::runtime_error);
    CHECK_THROWS_AS(save_image(img, dir.path / "no-such-dir" / "x.pgm"), std::runtime_error);
}

TEST_CASE("mse hand values") {
    Image a(2, 1), b(2, 1);
    a.data = {0.0, 0.0};
    b.data = {3.0, 4.0};
    CHECK(mse(a, b) == doctest::Approx(12.5).epsilon(1e-15));
    CHECK(mse(a, a) == 0.0);

    Image c(2, 1), d(2, 1);
    c.data = {0.0, 0.0};
    d.data = {255.0, 255.0};
    CHECK(mse(c, d) == doctest::Approx(65025.0).epsilon(1e-15));

    Image e(1, 2);
    CHECK_THROWS_AS(mse(a, e), std::invalid_argument);
}

TEST_CASE("mse is symmetric") {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        const Image a = synth::random_image(7, 9, seed);
        const Image b = synth::random_image(7, 9, seed + 100);
        CHECK(mse(a, b) == mse(b, a));
    }
}

TEST_CASE("psnr values and sentinel") {
    const Image a = synth::random_image(6, 6, 3);
    const QualityReport same = psnr(a, a);
    CHECK(same.mse == 0.0);
    CHECK(std::isinf(same.psnr_db));
    CHECK(same.psnr_db > 0.0);
    CHECK(same.bit_depth == 8);

    Image zero(4, 4, 0.0), full(4, 4, 255.0);
    const QualityReport worst = psnr(zero, full);
    CHECK(worst.psnr_db == doctest::Approx(0.0).epsilon(1e-12));

    Image one(4, 4, 1.0);
    const QualityReport unit = psnr(zero, one);
    // 20*log10(255)
    CHECK(unit.psnr_db == doctest::Approx(48.1308036086791).epsilon(1e-12));

    CHECK_THROWS_AS(psnr(zero, one, 0), std::invalid_argument);
}

TEST_CASE("psnr is monotone decreasing in mse") {
    const Image ref(8, 8, 100.0);
    double last_psnr = std::numeric_limits<double>::infinity();
    double last_mse = 0.0;
    for (double step : {0.5, 2.0, 9.0, 40.0, 120.0}) {
        Image test = ref;
        for (std::size_t i = 0; i < test.data.size(); ++i)
            test.data[i] += (i % 2 ? step : -step);
        const QualityReport q = psnr(ref, test);
        CHECK(q.mse > last_mse);
        CHECK(q.psnr_db < last_psnr);
        last_mse = q.mse;
        last_psnr = q.psnr_db;
    }
}

TEST_CASE("psnr respects the bit-depth parameter") {
    Image zero(4, 4, 0.0), one(4, 4, 1.0);
    // peak 1 at k=1: psnr = 10*log10(1/1) = 0
    CHECK(psnr(zero, one, 1).psnr_db == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(psnr(zero, one, 16).psnr_db > psnr(zero, one, 8).psnr_db);
}
