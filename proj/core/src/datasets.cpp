#include "flowermatch/datasets.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "flowermatch/error.hpp"

namespace flowermatch {

using nlohmann::json;

namespace {

[[noreturn]] void parse_error(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what);
}

double number_at(const json& arr, std::size_t idx, std::size_t line, const char* what) {
  if (!arr.is_array() || idx >= arr.size() || !arr[idx].is_number()) {
    parse_error(line, std::string("expected numeric ") + what);
  }
  return arr[idx].get<double>();
}

Point3 parse_xyz(const json& v, std::size_t line) {
  if (!v.is_array() || v.size() != 3) parse_error(line, "flower must be [x, y, z]");
  return {number_at(v, 0, line, "x"), number_at(v, 1, line, "y"), number_at(v, 2, line, "z")};
}

CameraIntrinsics parse_intrinsics(const json& j, std::size_t line) {
  if (!j.is_object()) parse_error(line, "intrinsics must be an object");
  if (j.contains("K")) {
    const json& k = j["K"];
    if (!k.is_array() || k.size() != 3) parse_error(line, "K must be 3x3");
    Eigen::Matrix3d m;
    for (int r = 0; r < 3; ++r) {
      if (!k[r].is_array() || k[r].size() != 3) parse_error(line, "K must be 3x3");
      for (int c = 0; c < 3; ++c) m(r, c) = number_at(k[r], c, line, "K entry");
    }
    return intrinsics_from_matrix(m);
  }
  for (const char* key : {"fx", "fy", "cx", "cy"}) {
    if (!j.contains(key) || !j[key].is_number()) {
      parse_error(line, std::string("intrinsics missing numeric '") + key + "'");
    }
  }
  CameraIntrinsics k{j["fx"].get<double>(), j["fy"].get<double>(), j["cx"].get<double>(),
                     j["cy"].get<double>()};
  k.validate();
  return k;
}

CameraPose parse_pose(const json& j, std::size_t line) {
  if (!j.is_array() || j.size() != 4) parse_error(line, "pose must be 4x4");
  Eigen::Matrix4d m;
  for (int r = 0; r < 4; ++r) {
    if (!j[r].is_array() || j[r].size() != 4) parse_error(line, "pose must be 4x4");
    for (int c = 0; c < 4; ++c) m(r, c) = number_at(j[r], c, line, "pose entry");
  }
  return CameraPose(m);
}

Cluster parse_raw(const json& raw, std::size_t line, DepthModel model) {
  if (!raw.is_object()) parse_error(line, "raw must be an object");
  for (const char* key : {"pixels", "intrinsics", "pose"}) {
    if (!raw.contains(key)) parse_error(line, std::string("raw block missing '") + key + "'");
  }
  const json& px = raw["pixels"];
  if (!px.is_array()) parse_error(line, "pixels must be an array");
  std::vector<PixelDetection> dets;
  dets.reserve(px.size());
  for (const auto& p : px) {
    if (!p.is_array() || p.size() != 3) parse_error(line, "pixel must be [u, v, depth]");
    dets.push_back({number_at(p, 0, line, "u"), number_at(p, 1, line, "v"), number_at(p, 2, line, "depth")});
  }
  const CameraIntrinsics k = parse_intrinsics(raw["intrinsics"], line);
  const CameraPose pose = parse_pose(raw["pose"], line);
  return frame_to_cluster(dets, k, pose, model);
}

void check_version(const json& rec, std::size_t line) {
  if (!rec.contains("version")) parse_error(line, "missing 'version'");
  if (!rec["version"].is_number_integer() || rec["version"].get<int>() != kSchemaVersion) {
    throw Error(ErrorCode::SchemaVersionMismatch,
                "line " + std::to_string(line) + ": unsupported schema version " + rec["version"].dump());
  }
}

struct Parsed {
  std::vector<Cluster> frames;
  std::optional<std::string> header_name;
  std::optional<int> header_count;
};

Parsed parse_jsonl(std::istream& in, DepthModel model) {
  Parsed out;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    json rec;
    try {
      rec = json::parse(text);
    } catch (const json::parse_error& e) {
      parse_error(line, e.what());
    }
    if (!rec.is_object()) parse_error(line, "record must be a JSON object");
    check_version(rec, line);

    if (rec.contains("type") && rec["type"] == "header") {
      if (rec.contains("name") && rec["name"].is_string()) out.header_name = rec["name"].get<std::string>();
      if (rec.contains("flower_count")) {
        if (!rec["flower_count"].is_number_integer()) parse_error(line, "flower_count must be an integer");
        out.header_count = rec["flower_count"].get<int>();
      }
      continue;
    }

    if (!rec.contains("frame_id") || !rec["frame_id"].is_number_integer()) {
      parse_error(line, "missing integer 'frame_id'");
    }
    const bool has_flowers = rec.contains("flowers");
    const bool has_raw = rec.contains("raw");
    if (has_flowers == has_raw) parse_error(line, "exactly one of 'flowers' or 'raw' is required");

    Cluster c;
    c.frame_id = rec["frame_id"].get<std::int64_t>();
    if (has_flowers) {
      const json& fl = rec["flowers"];
      if (!fl.is_array()) parse_error(line, "'flowers' must be an array");
      c.points.reserve(fl.size());
      for (const auto& f : fl) c.points.push_back(parse_xyz(f, line));
    } else {
      try {
        c.points = parse_raw(rec["raw"], line, model).points;
      } catch (const Error& e) {
        if (e.code() == ErrorCode::ParseError) throw;
        throw e.with_context("line " + std::to_string(line));
      }
    }
    if (rec.contains("source") && rec["source"].is_string()) c.source = rec["source"].get<std::string>();
    for (const auto& p : c.points) {
      if (!p.allFinite()) parse_error(line, "non-finite coordinate");
    }
    out.frames.push_back(std::move(c));
  }
  return out;
}

double parse_double(std::string_view s, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    parse_error(line, "invalid number '" + std::string(s) + "'");
  }
  return v;
}

std::int64_t parse_int(std::string_view s, std::size_t line) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    parse_error(line, "invalid integer '" + std::string(s) + "'");
  }
  return v;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

Parsed parse_csv(std::istream& in) {
  Parsed out;
  std::map<std::int64_t, std::size_t> index_of;
  std::string text;
  std::size_t line = 0;
  bool header_seen = false;
  while (std::getline(in, text)) {
    ++line;
    if (trim(text).empty()) continue;
    std::vector<std::string_view> cells;
    std::string_view rest(text);
    for (;;) {
      const auto comma = rest.find(',');
      cells.push_back(trim(rest.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (!header_seen) {
      header_seen = true;
      if (cells.size() != 5 || cells[0] != "frame_id") {
        parse_error(line, "expected header frame_id,flower_idx,x,y,z");
      }
      continue;
    }
    if (cells.size() != 5) parse_error(line, "expected 5 columns");
    const std::int64_t frame_id = parse_int(cells[0], line);
    parse_int(cells[1], line);
    const Point3 p(parse_double(cells[2], line), parse_double(cells[3], line), parse_double(cells[4], line));
    if (!p.allFinite()) parse_error(line, "non-finite coordinate");

    auto [it, inserted] = index_of.try_emplace(frame_id, out.frames.size());
    if (inserted) {
      out.frames.emplace_back();
      out.frames.back().frame_id = frame_id;
    }
    out.frames[it->second].points.push_back(p);
  }
  return out;
}

}  // namespace

LoadedDataset prune_frames(std::vector<Cluster> frames, int expected_count, std::string name) {
  if (expected_count < 1) throw Error(ErrorCode::InvalidParameter, "expected flower count must be >= 1");
  LoadedDataset out;
  out.dataset.name = std::move(name);
  out.dataset.declared_flower_count = expected_count;
  for (auto& f : frames) {
    if (f.size() == static_cast<std::size_t>(expected_count)) {
      out.dataset.frames.push_back(std::move(f));
    } else {
      out.prune.dropped.push_back({f.frame_id, f.size()});
    }
  }
  out.prune.kept = out.dataset.frames.size();
  if (out.dataset.frames.empty()) {
    throw Error(ErrorCode::EmptyAfterPruning,
                "no frames with " + std::to_string(expected_count) + " flowers in '" + out.dataset.name + "'");
  }
  return out;
}

LoadedDataset read_dataset(std::istream& in, DatasetFormat format, const LoadOptions& opts) {
  Parsed parsed = format == DatasetFormat::Csv ? parse_csv(in) : parse_jsonl(in, opts.depth_model);
  const std::optional<int> count = opts.expected_count ? opts.expected_count : parsed.header_count;
  if (!count) {
    throw Error(ErrorCode::InvalidParameter, "expected flower count not given and no dataset header");
  }
  std::string name = opts.name.value_or(parsed.header_name.value_or(""));
  return prune_frames(std::move(parsed.frames), *count, std::move(name));
}

LoadedDataset load_dataset(const std::filesystem::path& path, const LoadOptions& opts) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  const auto format = path.extension() == ".csv" ? DatasetFormat::Csv : DatasetFormat::JsonLines;
  try {
    LoadedDataset out = read_dataset(in, format, opts);
    if (out.dataset.name.empty()) out.dataset.name = path.stem().string();
    return out;
  } catch (const Error& e) {
    throw e.with_context(path.string());
  }
}

void write_dataset(std::ostream& out, const Dataset& d) {
  json header{{"version", kSchemaVersion}, {"type", "header"}, {"name", d.name},
              {"flower_count", d.declared_flower_count}};
  out << header.dump() << '\n';
  for (const auto& f : d.frames) {
    json flowers = json::array();
    for (const auto& p : f.points) flowers.push_back({p.x(), p.y(), p.z()});
    json rec{{"version", kSchemaVersion}, {"frame_id", f.frame_id}, {"flowers", std::move(flowers)}};
    if (f.source) rec["source"] = *f.source;
    out << rec.dump() << '\n';
  }
}

void save_dataset(const std::filesystem::path& path, const Dataset& d) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  write_dataset(out, d);
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

std::string distribution_to_json(const DescriptorDistribution& dist) {
  json j{{"version", kSchemaVersion},
         {"mean", {dist.mean(0), dist.mean(1)}},
         {"cov", {{dist.cov(0, 0), dist.cov(0, 1)}, {dist.cov(1, 0), dist.cov(1, 1)}}},
         {"flower_count", dist.flower_count}};
  return j.dump(2);
}

DescriptorDistribution distribution_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  auto missing = [](const char* key) {
    return Error(ErrorCode::SchemaVersionMismatch, std::string("distribution missing field '") + key + "'");
  };
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "distribution must be a JSON object");
  for (const char* key : {"version", "mean", "cov", "flower_count"}) {
    if (!j.contains(key)) throw missing(key);
  }
  if (!j["version"].is_number_integer() || j["version"].get<int>() != kSchemaVersion) {
    throw Error(ErrorCode::SchemaVersionMismatch, "unsupported distribution version " + j["version"].dump());
  }
  const json& m = j["mean"];
  const json& c = j["cov"];
  if (!m.is_array() || m.size() != 2 || !c.is_array() || c.size() != 2 || !c[0].is_array() ||
      c[0].size() != 2 || !c[1].is_array() || c[1].size() != 2 || !j["flower_count"].is_number_integer()) {
    throw Error(ErrorCode::SchemaVersionMismatch, "distribution fields have the wrong shape");
  }
  DescriptorDistribution d;
  try {
    d.mean = {m[0].get<double>(), m[1].get<double>()};
    d.cov << c[0][0].get<double>(), c[0][1].get<double>(), c[1][0].get<double>(), c[1][1].get<double>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaVersionMismatch, std::string("non-numeric distribution entry: ") + e.what());
  }
  d.flower_count = j["flower_count"].get<int>();
  d.validate(kLoadSymmetryTolerance);
  return d;
}

void save_distribution(const std::filesystem::path& path, const DescriptorDistribution& dist) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << distribution_to_json(dist) << '\n';
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

DescriptorDistribution load_distribution(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return distribution_from_json(buf.str());
}

}  // namespace flowermatch
