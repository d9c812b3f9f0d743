#pragma once

// Text rendering of alignments and CSV/TSV export of score matrices.

#include <charconv>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "s2s/alignment.hpp"
#include "s2s/core.hpp"

namespace s2s {

struct RenderOptions {
  std::string gap_symbol = "-";
  std::optional<std::size_t> column_width;  // minimum width; absent = auto per column
  std::optional<std::size_t> line_wrap;     // columns per rendered block; absent = one block
  bool marker_row = false;                  // |, ., space for match/mismatch/gap

  void validate() const {
    if (gap_symbol.empty() || gap_symbol.find_first_not_of(' ') == std::string::npos)
      throw std::invalid_argument("RenderOptions: gap_symbol must be nonempty and not padding");
    if (column_width && *column_width == 0)
      throw std::invalid_argument("RenderOptions: column_width must be positive");
    if (line_wrap && *line_wrap == 0)
      throw std::invalid_argument("RenderOptions: line_wrap must be positive");
  }
};

namespace detail {

inline void pad_to(std::string& row, const std::string& cell, std::size_t width) {
  row += cell;
  const std::size_t have = utf8::scalar_count(cell);
  if (width > have) row.append(width - have, ' ');
}

}  // namespace detail

/// Two (or three, with marker_row) text rows per block: S on top, T below,
/// markers between them. Columns are padded to the widest cell in the
/// column (in Unicode scalars); token alignments separate columns with one
/// space, character alignments with none. Gaps render as gap_symbol.
/// Stripping padding and gap cells reconstructs both sequences exactly.
template <class Sym>
std::string render_alignment(const AlignmentResult<Sym>& result, const RenderOptions& opts = {}) {
  opts.validate();
  const std::size_t ncols = result.aligned_a.size();
  if (ncols == 0) return "";

  const auto cell_of = [&](const std::optional<Sym>& sym) {
    return sym ? symbol_text(*sym) : opts.gap_symbol;
  };
  std::vector<std::string> cells_a(ncols), cells_b(ncols);
  std::vector<std::size_t> width(ncols);
  for (std::size_t j = 0; j < ncols; ++j) {
    cells_a[j] = cell_of(result.aligned_a[j]);
    cells_b[j] = cell_of(result.aligned_b[j]);
    width[j] = std::max(utf8::scalar_count(cells_a[j]), utf8::scalar_count(cells_b[j]));
    if (opts.column_width) width[j] = std::max(width[j], *opts.column_width);
  }

  constexpr bool token_mode = std::is_same_v<Sym, std::string>;
  const std::string_view sep = token_mode ? " " : "";
  const std::size_t block = opts.line_wrap ? *opts.line_wrap : ncols;

  std::string out;
  for (std::size_t start = 0; start < ncols; start += block) {
    const std::size_t end = std::min(ncols, start + block);
    if (start > 0) out += "\n\n";
    std::string row_a, row_m, row_b;
    for (std::size_t j = start; j < end; ++j) {
      if (j > start) {
        row_a += sep;
        row_m += sep;
        row_b += sep;
      }
      detail::pad_to(row_a, cells_a[j], width[j]);
      detail::pad_to(row_b, cells_b[j], width[j]);
      if (opts.marker_row) {
        const bool gap = !result.aligned_a[j] || !result.aligned_b[j];
        const char mark = gap ? ' ' : (*result.aligned_a[j] == *result.aligned_b[j] ? '|' : '.');
        detail::pad_to(row_m, std::string(1, mark), width[j]);
      }
    }
    out += row_a;
    if (opts.marker_row) {
      out += '\n';
      out += row_m;
    }
    out += '\n';
    out += row_b;
  }
  return out;
}

enum class MatrixFormat { csv, tsv };

namespace detail {

inline std::string format_cell_value(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, end);
}

inline std::string quote_cell(const std::string& cell, char delim) {
  if (cell.find_first_of(std::string_view("\"\r\n") ) == std::string::npos &&
      cell.find(delim) == std::string::npos)
    return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::string emit_grid(const std::vector<std::vector<std::string>>& grid, MatrixFormat fmt) {
  const char delim = fmt == MatrixFormat::csv ? ',' : '\t';
  std::string out;
  for (const auto& row : grid) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j > 0) out += delim;
      out += quote_cell(row[j], delim);
    }
    out += '\n';
  }
  return out;
}

}  // namespace detail

/// Values only, one matrix row per line, shortest round-trip decimals.
inline std::string export_matrix(const ScoreMatrix& m, MatrixFormat fmt) {
  std::vector<std::vector<std::string>> grid(m.rows, std::vector<std::string>(m.cols));
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) grid[i][j] = detail::format_cell_value(m.at(i, j));
  return detail::emit_grid(grid, fmt);
}

/// Labeled (n+2) x (m+2) grid around an (n+1) x (m+1) DP matrix: the first
/// row holds two empty cells then T's symbols; the first column holds two
/// empty cells then S's symbols (the extra empty cell in each covers the DP
/// boundary row/column).
inline std::string export_matrix(const ScoreMatrix& m, MatrixFormat fmt,
                                 const std::vector<std::string>& s_labels,
                                 const std::vector<std::string>& t_labels) {
  if (m.rows < 1 || m.cols < 1 || s_labels.size() != m.rows - 1 || t_labels.size() != m.cols - 1)
    throw std::invalid_argument(
        "export_matrix: labels must have sizes rows-1 and cols-1 (one per sequence symbol)");
  std::vector<std::vector<std::string>> grid;
  grid.reserve(m.rows + 1);
  std::vector<std::string> header(m.cols + 1);
  for (std::size_t j = 0; j < t_labels.size(); ++j) header[j + 2] = t_labels[j];
  grid.push_back(std::move(header));
  for (std::size_t i = 0; i < m.rows; ++i) {
    std::vector<std::string> row(m.cols + 1);
    row[0] = i == 0 ? std::string() : s_labels[i - 1];
    for (std::size_t j = 0; j < m.cols; ++j) row[j + 1] = detail::format_cell_value(m.at(i, j));
    grid.push_back(std::move(row));
  }
  return detail::emit_grid(grid, fmt);
}

}  // namespace s2s
