#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

#include "spca/matrix.hpp"
#include "spca/sdp_solver.hpp"
#include "spca/synth.hpp"
#include "spca/theory.hpp"
#include "spca/witness.hpp"

namespace spca {

// "%.17g"
std::string format_double(double v);

// d rows of d comma-separated values, no header, LF endings.
void write_matrix_csv(std::ostream& os, const SymMatrix& m);
void write_mask_csv(std::ostream& os, const SymMask& mask);
// Throws InvalidInput on ragged, non-square, non-numeric or asymmetric input.
SymMatrix read_matrix_csv(std::istream& is);
SymMask read_mask_csv(std::istream& is);

// Header row of column names; an empty cell or the literal NA is missing.
DataTable read_table_csv(std::istream& is);

// JSON documents (pretty-printed, 17 significant digits).
std::string solution_json(const SdpSolution& sol);
std::string witness_json(const WitnessReport& r, const WitnessTriple& t);
std::string theory_json(const TheoryReport& r);
std::string ground_truth_json(const GroundTruth& gt);

// Flat `key = value` text. Blank lines and lines starting with '#' are
// skipped. Throws InvalidInput on a line without '=' or a repeated key.
std::map<std::string, std::string> parse_config(std::istream& is);
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);

// Whole-file helpers; throw InvalidInput when the file cannot be opened.
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace spca
