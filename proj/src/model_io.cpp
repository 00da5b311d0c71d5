#include "hwr/model_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "hwr/errors.hpp"

namespace hwr {

using nlohmann::json;

json model_to_json(const WaveletModel& model, const ModelMeta& meta) {
  json blocks = json::array();
  const auto& idx = model.index_set();
  for (std::size_t b = 0; b < idx.blocks().size(); ++b) {
    const auto c = model.block_coefficients(b);
    for (double v : c)
      if (!std::isfinite(v)) throw Error(Errc::NonFiniteInput, "model has non-finite coefficients");
    blocks.push_back({{"j", idx.blocks()[b].level}, {"coeffs", std::vector<double>(c.begin(), c.end())}});
  }
  return {{"m", model.basis().order()},
          {"d", model.dim()},
          {"blocks", std::move(blocks)},
          {"meta", {{"seed", meta.seed}, {"stage", meta.stage}, {"n", idx.max_level()}}}};
}

LoadedModel model_from_json(const json& j) {
  try {
    const int m = j.at("m").get<int>();
    const int d = j.at("d").get<int>();
    auto basis = std::make_shared<const WaveletBasis>(SplineOrder{m});
    std::vector<std::vector<int>> levels;
    std::vector<std::vector<double>> coeffs;
    int n = 0;
    for (const auto& b : j.at("blocks")) {
      levels.push_back(b.at("j").get<std::vector<int>>());
      coeffs.push_back(b.at("coeffs").get<std::vector<double>>());
      n = std::max(n, level_norm(levels.back()));
    }
    ModelMeta meta;
    if (j.contains("meta")) {
      const auto& mj = j.at("meta");
      if (mj.contains("seed")) meta.seed = mj.at("seed").get<std::uint64_t>();
      if (mj.contains("stage")) meta.stage = mj.at("stage").get<std::string>();
      if (mj.contains("n")) n = std::max(n, mj.at("n").get<int>());
    }
    const auto given = levels;
    auto idx = std::make_shared<const HyperbolicIndexSet>(HyperbolicIndexSet::from_levels(d, n, levels));
    if (idx->blocks().size() != given.size()) throw Error(Errc::ParseError, "duplicate blocks in model file");
    std::vector<double> a(idx->size(), 0.0);
    for (std::size_t i = 0; i < given.size(); ++i) {
      const std::size_t b = *idx->find_block(given[i]);
      const Block& blk = idx->blocks()[b];
      if (coeffs[i].size() != blk.size)
        throw Error(Errc::LengthMismatch, "block has " + std::to_string(coeffs[i].size()) + " coefficients, expected " +
                                              std::to_string(blk.size));
      std::copy(coeffs[i].begin(), coeffs[i].end(), a.begin() + static_cast<std::ptrdiff_t>(blk.offset));
    }
    return {WaveletModel(basis, idx, std::move(a)), meta};
  } catch (const json::exception& e) {
    throw Error(Errc::ParseError, std::string("malformed model JSON: ") + e.what());
  }
}

json anova_report_to_json(const AnovaReport& report) {
  json terms = json::array();
  for (const auto& t : report.terms) {
    json e = {{"u", t.u.labels()}, {"variance", t.variance}};
    e["rho"] = report.has_indices ? json(t.rho) : json(nullptr);
    terms.push_back(std::move(e));
  }
  return {{"grand_mean", report.grand_mean}, {"total_variance", report.total_variance}, {"terms", std::move(terms)}};
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw Error(Errc::IoError, "cannot write " + tmp.string());
    os.write(content.data(), static_cast<std::streamsize>(content.size()));
    os.flush();
    if (!os) throw Error(Errc::IoError, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error(Errc::IoError, "cannot rename onto " + path.string() + ": " + ec.message());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(Errc::IoError, "cannot read " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void save_model(const std::filesystem::path& path, const WaveletModel& model, const ModelMeta& meta) {
  write_file_atomic(path, model_to_json(model, meta).dump(1) + "\n");
}

LoadedModel load_model(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  const json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw Error(Errc::ParseError, "model file is not valid JSON: " + path.string());
  return model_from_json(j);
}

namespace {

std::vector<std::string_view> split_line(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(',', start);
    auto cell = line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
    while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) cell.remove_prefix(1);
    while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t' || cell.back() == '\r')) cell.remove_suffix(1);
    out.push_back(cell);
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_double(std::string_view s, std::size_t line) {
  double v = 0.0;
  const char* first = s.data();
  if (!s.empty() && s.front() == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw Error(Errc::ParseError, "line " + std::to_string(line) + ": not a number: '" + std::string(s) + "'");
  return v;
}

}  // namespace

CsvSamples parse_samples_csv(std::string_view text, bool require_values) {
  std::size_t pos = 0, line_no = 0;
  auto next_line = [&](std::string_view& out) {
    while (pos < text.size()) {
      const auto end = text.find('\n', pos);
      out = text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
      pos = end == std::string_view::npos ? text.size() : end + 1;
      ++line_no;
      if (!out.empty() && out.back() == '\r') out.remove_suffix(1);
      if (!out.empty()) return true;
    }
    return false;
  };
  std::string_view line;
  if (!next_line(line)) throw Error(Errc::ParseError, "sample file is empty");
  const auto header = split_line(line);
  int d = 0;
  bool has_y = false;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "x" + std::to_string(i + 1)) {
      if (has_y) throw Error(Errc::ParseError, "column y must be last");
      ++d;
    } else if (header[i] == "y" && i + 1 == header.size()) {
      has_y = true;
    } else {
      throw Error(Errc::ParseError, "unexpected header column '" + std::string(header[i]) + "' (expected x1..xd,y)");
    }
  }
  if (d == 0) throw Error(Errc::ParseError, "header has no coordinate columns");
  if (require_values && !has_y) throw Error(Errc::ParseError, "sample file has no y column");

  CsvSamples out;
  out.samples.d = d;
  const std::size_t width = static_cast<std::size_t>(d) + (has_y ? 1 : 0);
  while (next_line(line)) {
    const auto cells = split_line(line);
    if (cells.size() != width)
      throw Error(Errc::ParseError, "line " + std::to_string(line_no) + ": expected " + std::to_string(width) + " columns");
    for (int i = 0; i < d; ++i) out.samples.nodes.push_back(parse_double(cells[static_cast<std::size_t>(i)], line_no));
    if (has_y) out.samples.values.push_back(parse_double(cells.back(), line_no));
  }
  if (out.samples.nodes.empty()) throw Error(Errc::ParseError, "sample file has no data rows");
  out.wrapped = wrap_to_torus(out.samples);
  out.samples.validate(require_values);
  return out;
}

CsvSamples read_samples_csv(const std::filesystem::path& path, bool require_values) {
  return parse_samples_csv(read_file(path), require_values);
}

std::string samples_to_csv(const SampleSet& X) {
  std::string s;
  for (int i = 1; i <= X.d; ++i) s += (i > 1 ? ",x" : "x") + std::to_string(i);
  if (X.has_values()) s += ",y";
  s += '\n';
  char buf[40];
  for (std::size_t r = 0; r < X.size(); ++r) {
    const auto x = X.node(r);
    for (int i = 0; i < X.d; ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", x[static_cast<std::size_t>(i)]);
      if (i) s += ',';
      s += buf;
    }
    if (X.has_values()) {
      std::snprintf(buf, sizeof buf, "%.17g", X.values[r]);
      s += ',';
      s += buf;
    }
    s += '\n';
  }
  return s;
}

}  // namespace hwr
