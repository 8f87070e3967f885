#pragma once

#include "pdest/core.hpp"
#include "pdest/field.hpp"
#include "pdest/repr.hpp"
#include "pdest/vr.hpp"

#include <filesystem>
#include <string>

namespace pdest {

class ParseError : public Error
{
public:
  using Error::Error;
};

/// Diagram CSV: header `birth,death,dim`, one pair per row. Every pair is
/// validated against the box.
PersistenceDiagram read_diagram_csv(const std::filesystem::path& path,
                                    const OmegaBox& box);
void write_diagram_csv(const std::filesystem::path& path,
                       const PersistenceDiagram& diagram);

/// A sample is either a directory of diagram CSVs (read in file-name order)
/// or a JSON file {"L": x, "diagrams": [[[b, d, dim], ...], ...]}. A JSON
/// "L" that disagrees with the box is rejected.
DiagramSample read_sample(const std::filesystem::path& path, const OmegaBox& box);
void write_sample_json(const std::filesystem::path& path,
                       const DiagramSample& sample);

/// Point CSV: header `x,y` or `x,y,z`.
PointCloud read_point_csv(const std::filesystem::path& path);
void write_point_csv(const std::filesystem::path& path, const PointCloud& cloud);

/// Field CSV: `# origin_x,origin_y,cell,nx,ny` comment line carrying the
/// geometry, then ny rows of nx comma-separated values.
ScalarField read_field_csv(const std::filesystem::path& path);
void write_field_csv(const std::filesystem::path& path, const ScalarField& field);

/// Curve CSV with columns x,mean,q_lo,q_hi (bands left blank when absent).
void write_curve_csv(const std::filesystem::path& path, const BettiCurve& curve);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

} // namespace pdest
