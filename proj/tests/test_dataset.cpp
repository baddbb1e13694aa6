#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <random>
#include <set>

#include "gazenet/dataset.hpp"
#include "gazenet/error.hpp"
#include "gazenet/synth.hpp"

using namespace gazenet;

namespace {

std::vector<Sample> numbered(std::size_t n) {
  std::vector<Sample> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i].image_path = "img" + std::to_string(i) + ".pgm";
    out[i].face = {0, 0, 10, 10};
    out[i].eac = static_cast<EacClass>(i % kEacCount);
    out[i].subject_id = "s" + std::to_string(i % 5);
  }
  return out;
}

std::multiset<std::string> paths(const std::vector<Sample>& v) {
  std::multiset<std::string> out;
  for (const auto& s : v) out.insert(s.image_path);
  return out;
}

std::string header() { return std::string(kManifestHeader) + "\n"; }

}  // namespace

TEST_CASE("class names and parsing") {
  CHECK(class_names(7) == std::vector<std::string>{"VD", "VR", "VC", "AR", "AC", "ID", "K"});
  CHECK(class_names(3) == std::vector<std::string>{"Left", "Center", "Right"});
  for (std::size_t i = 0; i < kEacCount; ++i)
    CHECK(parse_eac(eac_name(static_cast<EacClass>(i))) == static_cast<EacClass>(i));
  CHECK_FALSE(parse_eac("XX").has_value());
  CHECK(class_names(2) == std::vector<std::string>{"class0", "class1"});
}

TEST_CASE("manifest parsing") {
  CHECK(parse_manifest(header()).empty());
  CHECK(parse_manifest("# comment\n" + header() + "\n# another\n").empty());

  const auto rows = parse_manifest(header() +
                                   "a.pgm,AR,1,2,30,40,,,,,,,,,\r\n"
                                   "b.pgm,K,0,0,5,5,1,2,3,4,5,6,7.5,8,subj\n");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].eac == EacClass::AR);
  CHECK(rows[0].face == Box{1, 2, 30, 40});
  CHECK_FALSE(rows[0].landmarks.has_value());
  CHECK(rows[1].landmarks == EyeLandmarks{{1, 2}, {3, 4}, {5, 6}, {7.5, 8}});
  CHECK(rows[1].subject_id == "subj");

  SUBCASE("errors name the row") {
    try {
      parse_manifest(header() + "a.pgm,VD,0,0,5,5,,,,,,,,,\nb.pgm,XX,0,0,5,5,,,,,,,,,\n");
      FAIL("expected a validation error");
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find("row 3") != std::string::npos);
      CHECK(std::string(e.what()).find("XX") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_manifest(""), ValidationError);
    CHECK_THROWS_AS(parse_manifest("image_path,eac\n"), ValidationError);
    CHECK_THROWS_AS(parse_manifest(header() + "a.pgm,VD,0,0,5\n"), ValidationError);
    CHECK_THROWS_AS(parse_manifest(header() + "a.pgm,VD,0,0,0,5,,,,,,,,,\n"), ValidationError);
    CHECK_THROWS_AS(parse_manifest(header() + "a.pgm,VD,0,0,x,5,,,,,,,,,\n"), ValidationError);
    CHECK_THROWS_AS(parse_manifest(header() + "a.pgm,VD,0,0,5,5,1,2,,,,,,,\n"), ValidationError);
    CHECK_THROWS_AS(parse_manifest(header() + ",VD,0,0,5,5,,,,,,,,,\n"), ValidationError);
  }
  CHECK_THROWS_AS(load_manifest("/nonexistent/manifest.csv"), IoError);
}

TEST_CASE("manifest round trip preserves samples") {
  std::mt19937_64 rng(12);
  auto samples = numbered(40);
  for (auto& s : samples)
    if (rng() % 2)
      s.landmarks = EyeLandmarks{{1.25, 2.0}, {3.0, 4.5}, {5.0, 6.0}, {7.0, 8.0}};
  CHECK(parse_manifest(format_manifest(samples)) == samples);

  const auto dir = std::filesystem::temp_directory_path() / "gazenet_test_manifest";
  std::filesystem::create_directories(dir);
  save_manifest(samples, dir / "m.csv");
  CHECK(load_manifest(dir / "m.csv") == samples);
  std::filesystem::remove_all(dir);
}

TEST_CASE("split_50_50") {
  auto s = split_50_50(numbered(11), 3);
  CHECK(s.train.size() == 6);
  CHECK(s.test.size() == 5);
  s = split_50_50(numbered(1170), 3);
  CHECK(s.train.size() == 585);
  CHECK(s.test.size() == 585);

  const auto a = split_50_50(numbered(50), 7), b = split_50_50(numbered(50), 7);
  CHECK(a.train == b.train);
  CHECK(a.test == b.test);
  CHECK(split_50_50(numbered(50), 8).train != a.train);
  CHECK_THROWS_AS(split_50_50(numbered(1), 1), ValidationError);

  SUBCASE("disjoint and exhaustive for random sizes and seeds") {
    std::mt19937_64 rng(99);
    for (int t = 0; t < 200; ++t) {
      const std::size_t n = 2 + rng() % 300;
      const auto all = numbered(n);
      const auto p = split_50_50(all, rng());
      const auto tr = paths(p.train), te = paths(p.test);
      std::vector<std::string> both;
      std::set_intersection(tr.begin(), tr.end(), te.begin(), te.end(), std::back_inserter(both));
      CHECK(both.empty());
      auto u = tr;
      u.insert(te.begin(), te.end());
      CHECK(u == paths(all));
      CHECK(p.train.size() - p.test.size() <= 1);
    }
  }
}

TEST_CASE("split_by_subject keeps subjects together") {
  const auto all = numbered(53);
  const auto p = split_by_subject(all, 4);
  std::set<std::string> tr, te;
  for (const auto& s : p.train) tr.insert(s.subject_id);
  for (const auto& s : p.test) te.insert(s.subject_id);
  for (const auto& id : tr) CHECK(te.count(id) == 0);
  CHECK(p.train.size() + p.test.size() == 53);
  CHECK_FALSE(p.train.empty());
  CHECK_FALSE(p.test.empty());

  auto one = numbered(10);
  for (auto& s : one) s.subject_id = "x";
  CHECK_THROWS_AS(split_by_subject(one, 1), ValidationError);
}

TEST_CASE("three-class mapping") {
  const auto m = ThreeClassMap::defaults();
  Sample s;
  const auto map = [&](EacClass c) {
    s.eac = c;
    return to_three_class(s, m);
  };
  CHECK(map(EacClass::VD) == ThreeClass::Center);
  CHECK(map(EacClass::AR) == ThreeClass::Left);
  CHECK(map(EacClass::AC) == ThreeClass::Right);
  for (auto c : {EacClass::VR, EacClass::VC, EacClass::ID, EacClass::K}) CHECK_FALSE(map(c).has_value());

  auto missing = m;
  missing.targets[static_cast<std::size_t>(EacClass::ID)].reset();
  CHECK_THROWS_AS(missing.validate(), ValidationError);
  CHECK_THROWS_AS(to_three_class(s, missing), ValidationError);

  // 3-class datasets are never larger than the 7-class one.
  const auto all = numbered(70);
  std::size_t kept3 = 0, kept7 = 0;
  for (const auto& x : all) {
    kept3 += label_for(x, 3, m).has_value();
    kept7 += label_for(x, 7, m).has_value();
  }
  CHECK(kept7 == 70);
  CHECK(kept3 == 30);
  ThreeClassMap none;
  none.targets.fill(ThreeTarget::Center);
  std::size_t kept_all = 0;
  for (const auto& x : all) kept_all += label_for(x, 3, none).has_value();
  CHECK(kept_all == 70);
}

TEST_CASE("eye samples from a synthetic corpus") {
  const auto corpus = generate_synthetic(2, 5);
  REQUIRE(corpus.size() == 14);
  std::vector<Sample> samples;
  for (const auto& item : corpus) samples.push_back(item.sample);
  const ImageLoader loader = [&](const std::string& p) {
    for (const auto& item : corpus)
      if (item.sample.image_path == p) return item.image;
    throw IoError("no image " + p);
  };
  const auto m = ThreeClassMap::defaults();
  for (auto geom : {PatchGeometry::roi_default(), PatchGeometry::ert_default()}) {
    const auto left = make_eye_samples(samples, EyeSide::Left, geom, 7, m, loader);
    const auto right = make_eye_samples(samples, EyeSide::Right, geom, 7, m, loader);
    CHECK(left.size() == right.size());
    CHECK(left.size() == 14);
    for (const auto& e : left) CHECK(e.input.shape() == Shape{1, geom.patch_h, geom.patch_w});
    for (std::size_t i = 0; i < left.size(); ++i)
      CHECK(left[i].label == static_cast<std::size_t>(samples[i].eac));
    CHECK(make_eye_samples(samples, EyeSide::Left, geom, 3, m, loader).size() == 6);
  }

  auto stripped = samples;
  stripped[3].landmarks.reset();
  try {
    make_eye_samples(stripped, EyeSide::Left, PatchGeometry::ert_default(), 7, m, loader);
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("lo_x") != std::string::npos);
  }
  CHECK(make_eye_samples(stripped, EyeSide::Left, PatchGeometry::roi_default(), 7, m, loader).size() == 14);
}
