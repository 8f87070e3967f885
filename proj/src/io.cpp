#include "pdest/io.hpp"

#include "json.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace pdest {

namespace fs = std::filesystem;

namespace {

std::ifstream open_in(const fs::path& path)
{
  std::ifstream in(path);
  if (!in)
    throw Error("cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_out(const fs::path& path)
{
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error("cannot open '" + path.string() + "' for writing");
  return out;
}

std::string trim(const std::string& s)
{
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line)
{
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ','))
    out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',')
    out.emplace_back();
  return out;
}

double parse_double(const std::string& s, const fs::path& path, std::size_t line)
{
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (!s.empty() && *first == '+')
    ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw ParseError(path.string() + ":" + std::to_string(line) +
                     ": not a number: '" + s + "'");
  return v;
}

// Data rows of a CSV whose header must match `header` exactly.
std::vector<std::vector<double>> read_table(const fs::path& path,
                                            const std::vector<std::string>& header,
                                            std::size_t min_cols)
{
  auto in = open_in(path);
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::vector<double>> rows;
  bool seen_header = false;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty())
      continue;
    auto cells = split(t);
    if (!seen_header) {
      seen_header = true;
      width = cells.size();
      if (width < min_cols || width > header.size() ||
          !std::equal(cells.begin(), cells.end(), header.begin()))
        throw ParseError(path.string() + ": unexpected header '" + t + "'");
      continue;
    }
    if (cells.size() != width)
      throw ParseError(path.string() + ":" + std::to_string(lineno) +
                       ": expected " + std::to_string(width) + " columns");
    std::vector<double> row;
    for (const auto& c : cells)
      row.push_back(parse_double(c, path, lineno));
    rows.push_back(std::move(row));
  }
  if (!seen_header)
    throw ParseError(path.string() + ": missing header");
  return rows;
}

int as_dim(double v, const fs::path& path)
{
  if (v != static_cast<double>(static_cast<int>(v)))
    throw ParseError(path.string() + ": homology dimension must be an integer");
  return static_cast<int>(v);
}

} // namespace

std::string format_double(double v)
{
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

PersistenceDiagram read_diagram_csv(const fs::path& path, const OmegaBox& box)
{
  const auto rows = read_table(path, {"birth", "death", "dim"}, 3);
  std::vector<PersistencePair> pairs;
  pairs.reserve(rows.size());
  for (const auto& r : rows)
    pairs.push_back({r[0], r[1], as_dim(r[2], path)});
  try {
    return PersistenceDiagram(std::move(pairs), box);
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

void write_diagram_csv(const fs::path& path, const PersistenceDiagram& diagram)
{
  auto out = open_out(path);
  out << "birth,death,dim\n";
  for (const auto& p : diagram.pairs())
    out << format_double(p.birth) << ',' << format_double(p.death) << ','
        << p.dim << '\n';
}

DiagramSample read_sample(const fs::path& path, const OmegaBox& box)
{
  std::vector<PersistenceDiagram> diagrams;
  if (fs::is_directory(path)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(path))
      if (entry.is_regular_file() && entry.path().extension() == ".csv")
        files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (files.empty())
      throw Error("no diagram CSVs in '" + path.string() + "'");
    for (const auto& f : files)
      diagrams.push_back(read_diagram_csv(f, box));
    return DiagramSample(std::move(diagrams), box);
  }

  auto in = open_in(path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  if (doc.contains("L") && doc["L"].get<double>() != box.side_length())
    throw Error(path.string() + ": sample L disagrees with the configured L");
  if (!doc.contains("diagrams") || !doc["diagrams"].is_array())
    throw ParseError(path.string() + ": missing \"diagrams\" array");
  std::size_t index = 0;
  for (const auto& d : doc["diagrams"]) {
    std::vector<PersistencePair> pairs;
    for (const auto& p : d) {
      if (!p.is_array() || p.size() != 3)
        throw ParseError(path.string() + ": pairs must be [birth, death, dim]");
      pairs.push_back({p[0].get<double>(), p[1].get<double>(),
                       as_dim(p[2].get<double>(), path)});
    }
    try {
      diagrams.emplace_back(std::move(pairs), box);
    } catch (const Error& e) {
      throw Error(path.string() + ": diagram " + std::to_string(index) + ": " +
                  e.what());
    }
    ++index;
  }
  return DiagramSample(std::move(diagrams), box);
}

void write_sample_json(const fs::path& path, const DiagramSample& sample)
{
  nlohmann::json doc;
  doc["L"] = sample.box().side_length();
  doc["diagrams"] = nlohmann::json::array();
  for (const auto& d : sample.diagrams()) {
    auto arr = nlohmann::json::array();
    for (const auto& p : d.pairs())
      arr.push_back({p.birth, p.death, p.dim});
    doc["diagrams"].push_back(std::move(arr));
  }
  auto out = open_out(path);
  out << doc.dump() << '\n';
}

PointCloud read_point_csv(const fs::path& path)
{
  auto rows = read_table(path, {"x", "y", "z"}, 2);
  if (rows.empty())
    throw EmptyCloud();
  return PointCloud(std::move(rows));
}

void write_point_csv(const fs::path& path, const PointCloud& cloud)
{
  auto out = open_out(path);
  out << (cloud.ambient_dim() == 2 ? "x,y\n" : "x,y,z\n");
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    for (std::size_t k = 0; k < cloud.ambient_dim(); ++k)
      out << (k ? "," : "") << format_double(cloud.coord(i, k));
    out << '\n';
  }
}

ScalarField read_field_csv(const fs::path& path)
{
  auto in = open_in(path);
  std::string line;
  std::size_t lineno = 0;
  GridShape shape;
  bool have_shape = false;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty())
      continue;
    if (t.front() == '#') {
      t = trim(t.substr(1));
      if (t == "origin_x,origin_y,cell,nx,ny")
        continue;
      if (have_shape)
        throw ParseError(path.string() + ": repeated geometry line");
      const auto cells = split(t);
      if (cells.size() != 5)
        throw ParseError(path.string() + ": geometry line needs 5 values");
      shape.origin_x = parse_double(cells[0], path, lineno);
      shape.origin_y = parse_double(cells[1], path, lineno);
      shape.cell = parse_double(cells[2], path, lineno);
      shape.nx = static_cast<std::size_t>(parse_double(cells[3], path, lineno));
      shape.ny = static_cast<std::size_t>(parse_double(cells[4], path, lineno));
      have_shape = true;
      continue;
    }
    if (!have_shape)
      throw ParseError(path.string() + ": values before the geometry line");
    const auto cells = split(t);
    if (cells.size() != shape.nx)
      throw ParseError(path.string() + ":" + std::to_string(lineno) +
                       ": expected " + std::to_string(shape.nx) + " values");
    for (const auto& c : cells)
      values.push_back(parse_double(c, path, lineno));
  }
  if (!have_shape)
    throw ParseError(path.string() + ": missing geometry line");
  if (values.size() != shape.size())
    throw ParseError(path.string() + ": expected " + std::to_string(shape.ny) +
                     " rows of values");
  return ScalarField(shape, std::move(values));
}

void write_field_csv(const fs::path& path, const ScalarField& field)
{
  const auto& g = field.shape();
  auto out = open_out(path);
  out << "# origin_x,origin_y,cell,nx,ny\n";
  out << "# " << format_double(g.origin_x) << ',' << format_double(g.origin_y)
      << ',' << format_double(g.cell) << ',' << g.nx << ',' << g.ny << '\n';
  for (std::size_t j = 0; j < g.ny; ++j) {
    for (std::size_t i = 0; i < g.nx; ++i)
      out << (i ? "," : "") << format_double(field.at(i, j));
    out << '\n';
  }
}

void write_curve_csv(const fs::path& path, const BettiCurve& curve)
{
  auto out = open_out(path);
  out << "x,mean,q_lo,q_hi\n";
  const bool bands = curve.lower.size() == curve.x.size();
  for (std::size_t k = 0; k < curve.x.size(); ++k) {
    out << format_double(curve.x[k]) << ',' << format_double(curve.mean[k])
        << ',';
    if (bands)
      out << format_double(curve.lower[k]) << ',' << format_double(curve.upper[k]);
    else
      out << ',';
    out << '\n';
  }
}

} // namespace pdest
