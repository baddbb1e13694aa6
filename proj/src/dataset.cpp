#include "gazenet/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iterator>
#include <map>
#include <numeric>
#include <sstream>

#include "gazenet/error.hpp"
#include "gazenet/pnm.hpp"
#include "gazenet/report.hpp"
#include "gazenet/rng.hpp"

namespace gazenet {

namespace {

constexpr const char* kEacNames[kEacCount] = {"VD", "VR", "VC", "AR", "AC", "ID", "K"};
constexpr std::size_t kManifestColumns = 15;

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  s = trim(s);
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

const char* eac_name(EacClass c) { return kEacNames[static_cast<std::size_t>(c)]; }

std::optional<EacClass> parse_eac(std::string_view token) {
  token = trim(token);
  for (std::size_t i = 0; i < kEacCount; ++i)
    if (token == kEacNames[i]) return static_cast<EacClass>(i);
  return std::nullopt;
}

const char* three_class_name(ThreeClass c) {
  switch (c) {
    case ThreeClass::Left: return "Left";
    case ThreeClass::Center: return "Center";
    case ThreeClass::Right: return "Right";
  }
  return "?";
}

std::vector<std::string> class_names(std::size_t n_classes) {
  if (n_classes == kEacCount) return {kEacNames, kEacNames + kEacCount};
  if (n_classes == kThreeCount) return {"Left", "Center", "Right"};
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n_classes; ++i) names.push_back("class" + std::to_string(i));
  return names;
}

std::vector<Sample> parse_manifest(std::string_view text) {
  std::vector<Sample> samples;
  bool seen_header = false;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty() || trim(line).front() == '#') continue;
    const std::string where = "manifest row " + std::to_string(line_no) + ": ";
    if (!seen_header) {
      require(trim(line) == kManifestHeader,
              where + "header must be '" + std::string(kManifestHeader) + "'");
      seen_header = true;
      continue;
    }
    const auto f = split_fields(line);
    require(f.size() == kManifestColumns, where + "expected " + std::to_string(kManifestColumns) +
                                              " columns, got " + std::to_string(f.size()));
    Sample s;
    s.image_path = std::string(trim(f[0]));
    require(!s.image_path.empty(), where + "empty image_path");
    const auto eac = parse_eac(f[1]);
    require(eac.has_value(), where + "unknown eac label '" + std::string(trim(f[1])) + "'");
    s.eac = *eac;
    int* face[4] = {&s.face.x, &s.face.y, &s.face.w, &s.face.h};
    const char* face_cols[4] = {"face_x", "face_y", "face_w", "face_h"};
    for (int k = 0; k < 4; ++k)
      require(parse_number(f[2 + k], *face[k]),
              where + "cannot parse " + face_cols[k] + " '" + std::string(f[2 + k]) + "'");
    require(s.face.w > 0 && s.face.h > 0, where + "face box must have positive extents");

    std::size_t present = 0;
    for (std::size_t k = 6; k < 14; ++k) present += trim(f[k]).empty() ? 0 : 1;
    require(present == 0 || present == 8,
            where + "landmark columns must be all present or all empty");
    if (present == 8) {
      double v[8];
      for (std::size_t k = 0; k < 8; ++k)
        require(parse_number(f[6 + k], v[k]),
                where + "cannot parse landmark '" + std::string(f[6 + k]) + "'");
      s.landmarks = EyeLandmarks{{v[0], v[1]}, {v[2], v[3]}, {v[4], v[5]}, {v[6], v[7]}};
    }
    s.subject_id = std::string(trim(f[14]));
    samples.push_back(std::move(s));
  }
  require(seen_header, "manifest: missing header row");
  return samples;
}

std::vector<Sample> load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open manifest: " + path.string());
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return parse_manifest(text);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

std::string format_manifest(const std::vector<Sample>& samples) {
  std::ostringstream os;
  os << kManifestHeader << '\n';
  for (const auto& s : samples) {
    os << s.image_path << ',' << eac_name(s.eac) << ',' << s.face.x << ',' << s.face.y << ','
       << s.face.w << ',' << s.face.h;
    if (s.landmarks) {
      const auto& l = *s.landmarks;
      for (const Point& p : {l.left_outer, l.left_inner, l.right_inner, l.right_outer})
        os << ',' << format_double(p.x) << ',' << format_double(p.y);
    } else {
      os << ",,,,,,,,";
    }
    os << ',' << s.subject_id << '\n';
  }
  return os.str();
}

void save_manifest(const std::vector<Sample>& samples, const std::filesystem::path& path) {
  write_text_file(path, format_manifest(samples));
}

SplitPair split_50_50(const std::vector<Sample>& samples, std::uint64_t seed) {
  require(samples.size() >= 2, "split: need at least 2 samples, got " +
                                   std::to_string(samples.size()));
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));
  const std::size_t n_train = (samples.size() + 1) / 2;
  SplitPair out;
  for (std::size_t k = 0; k < order.size(); ++k)
    (k < n_train ? out.train : out.test).push_back(samples[order[k]]);
  return out;
}

SplitPair split_by_subject(const std::vector<Sample>& samples, std::uint64_t seed) {
  require(samples.size() >= 2, "split: need at least 2 samples, got " +
                                   std::to_string(samples.size()));
  // Rows without a subject id form their own group.
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& id = samples[i].subject_id;
    groups[id.empty() ? "\x01row" + std::to_string(i) : id].push_back(i);
  }
  require(groups.size() >= 2, "subject split: need at least 2 distinct subjects");
  std::vector<const std::vector<std::size_t>*> order;
  for (const auto& [id, rows] : groups) order.push_back(&rows);
  Rng rng(seed);
  rng.shuffle(std::span<const std::vector<std::size_t>*>(order));

  const std::size_t target = (samples.size() + 1) / 2;
  SplitPair out;
  for (std::size_t g = 0; g < order.size(); ++g) {
    const bool last_for_test = g + 1 == order.size() && out.test.empty();
    const bool to_train = !last_for_test &&
                          (out.train.empty() || out.train.size() + order[g]->size() <= target);
    for (auto i : *order[g]) (to_train ? out.train : out.test).push_back(samples[i]);
  }
  return out;
}

ThreeClassMap ThreeClassMap::defaults() {
  ThreeClassMap m;
  m.targets.fill(ThreeTarget::Excluded);
  m.targets[static_cast<std::size_t>(EacClass::AR)] = ThreeTarget::Left;
  m.targets[static_cast<std::size_t>(EacClass::VD)] = ThreeTarget::Center;
  m.targets[static_cast<std::size_t>(EacClass::AC)] = ThreeTarget::Right;
  return m;
}

void ThreeClassMap::validate() const {
  for (std::size_t i = 0; i < kEacCount; ++i)
    require(targets[i].has_value(),
            std::string("3-class mapping has no entry for ") + kEacNames[i]);
}

std::optional<ThreeClass> to_three_class(const Sample& s, const ThreeClassMap& mapping) {
  mapping.validate();
  switch (*mapping.targets[static_cast<std::size_t>(s.eac)]) {
    case ThreeTarget::Left: return ThreeClass::Left;
    case ThreeTarget::Center: return ThreeClass::Center;
    case ThreeTarget::Right: return ThreeClass::Right;
    case ThreeTarget::Excluded: return std::nullopt;
  }
  return std::nullopt;
}

std::optional<std::size_t> label_for(const Sample& s, std::size_t n_classes,
                                     const ThreeClassMap& mapping) {
  if (n_classes == kEacCount) return static_cast<std::size_t>(s.eac);
  require(n_classes == kThreeCount, "classes must be 3 or 7, got " + std::to_string(n_classes));
  const auto c = to_three_class(s, mapping);
  if (!c) return std::nullopt;
  return static_cast<std::size_t>(*c);
}

ImageLoader pnm_loader(const std::filesystem::path& image_root) {
  return [image_root](const std::string& image_path) { return read_pnm(image_root / image_path); };
}

EyePatches make_eye_patches(const std::vector<Sample>& samples, const PatchGeometry& geometry,
                            std::size_t n_classes, const ThreeClassMap& mapping,
                            const ImageLoader& loader) {
  std::vector<std::pair<const Sample*, std::size_t>> kept;
  for (const auto& s : samples)
    if (const auto label = label_for(s, n_classes, mapping)) kept.emplace_back(&s, *label);

  if (geometry.mode == PathMode::Ert) {
    for (const auto& [s, label] : kept)
      require(s->landmarks.has_value(),
              s->image_path +
                  ": ert mode requires landmark columns lo_x,lo_y,li_x,li_y,ri_x,ri_y,ro_x,ro_y");
  }
  EyePatches out;
  out.left.reserve(kept.size());
  out.right.reserve(kept.size());
  for (const auto& [s, label] : kept) {
    const Image img = loader(s->image_path);
    out.left.push_back({extract_eye_patch(img, s->face, s->landmarks, EyeSide::Left, geometry), label});
    out.right.push_back({extract_eye_patch(img, s->face, s->landmarks, EyeSide::Right, geometry), label});
  }
  return out;
}

std::vector<Example<float>> to_examples(const std::vector<LabeledPatch>& patches) {
  std::vector<Example<float>> out;
  out.reserve(patches.size());
  for (const auto& p : patches) out.push_back({normalize(p.patch), p.label});
  return out;
}

std::vector<Example<float>> make_eye_samples(const std::vector<Sample>& samples, EyeSide side,
                                             const PatchGeometry& geometry, std::size_t n_classes,
                                             const ThreeClassMap& mapping,
                                             const ImageLoader& loader) {
  const auto patches = make_eye_patches(samples, geometry, n_classes, mapping, loader);
  return to_examples(side == EyeSide::Left ? patches.left : patches.right);
}

}  // namespace gazenet
