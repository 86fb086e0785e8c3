// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "hhowave/simulation.hpp"

namespace hhowave {

/// Header "time,<sensor>.<channel>,..." then one row per sample.
void write_traces_csv(const std::vector<SensorRecord>& sensors, std::ostream& out);

/// One cell average per polygon: pressure in fluid cells, velocity
/// magnitude in solid cells, plus the subdomain id.
struct CellAverages {
    std::vector<double> pressure;       // NaN in solid cells
    std::vector<double> speed;          // |v|, NaN in fluid cells
    std::vector<double> field;          // pressure or |v|, whichever applies
};

CellAverages cell_averages(const PolyMesh& mesh, const BlockSystem& sys, const Vector& ut);

/// ASCII VTK unstructured grid with one VTK_POLYGON per cell.
void write_vtu(const PolyMesh& mesh, const CellAverages& fields, double time, std::ostream& out);

/// Machine-readable run summary (JSON).
std::string summary_json(const RunSummary& s, const std::vector<SensorRecord>& sensors);

/// Plain CSV table writer used for the reports.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}
    void add(std::vector<std::string> row);
    void write(std::ostream& out) const;
    const std::vector<std::vector<std::string>>& rows() const { return rows_; }

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

/// Shortest round-trip decimal form.
std::string format_number(double v);

/// Writes `content` to `path`, creating parent directories.
void write_file(const std::string& path, const std::string& content);

} // namespace hhowave
