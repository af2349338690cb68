#pragma once

#include <fstream>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "dwell/classical.hpp"
#include "dwell/gaussian.hpp"
#include "dwell/hilbert.hpp"
#include "dwell/openquantum.hpp"
#include "dwell/rates.hpp"
#include "dwell/wigner.hpp"

namespace dwell {

/// %.17g, so that doubles round-trip and outputs can be compared bytewise.
std::string format_double(double v);

/// Comma-separated writer; throws Io when the file cannot be written.
class CsvWriter {
public:
    CsvWriter(const std::string& path, std::initializer_list<std::string_view> header);

    CsvWriter& cell(double v);
    CsvWriter& cell(std::size_t v);
    CsvWriter& cell(std::string_view v);
    void end_row();

private:
    std::ofstream out_;
    std::string path_;
    bool first_ = true;
};

void write_crossings(const std::string& path, std::span<const CrossingRecord> records);
void write_path(const std::string& path, const ClassicalPath& path_samples);
void write_spectrum(const std::string& path, const Eigen::VectorXd& energies);
void write_state(const std::string& path, const GridState& s);
/// Reads a `x, re_psi, im_psi` file written by write_state; the grid is
/// recovered from the x column.
GridState read_state(const std::string& path);
/// Columns t, x_expect, p_expect, p2_expect, energy, norm.
void write_closed_run(const std::string& path, const ClosedRun& run);
void write_sse(const std::string& path, const SSETrajectory& tr);
void write_lindblad(const std::string& path, const LindbladRun& run);
void write_wigner(const std::string& path, const WignerField& w);
void write_gaussian_report(const std::string& path, std::span<const LatticeRow> rows);
void write_rate_table(const std::string& path, const RateTable& table);
void write_density_diagonal(const std::string& path, const DensityMatrix& rho, const Eigen::VectorXd& energies);

} // namespace dwell
