#include <map>
#include <sstream>

#include "morp/errors.hpp"
#include "morp/patches.hpp"

namespace morp {
namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  fields.push_back(cur);
  return fields;
}

std::string trimmed(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

}  // namespace

std::vector<ManifestRow> parse_manifest(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ManifestParse("empty manifest");

  const std::vector<std::string> expected = {"Img",      "SpillDate", "Lat",
                                             "Lon",      "AcqDate",   "DeltaDays",
                                             "Patches",  "Split"};
  auto header = split_csv_line(line);
  for (auto& f : header) f = trimmed(f);
  if (header != expected)
    throw ManifestParse("manifest header must be Img,SpillDate,Lat,Lon,"
                        "AcqDate,DeltaDays,Patches,Split");

  std::vector<ManifestRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trimmed(line).empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != expected.size())
      throw ManifestParse("line " + std::to_string(line_no) +
                          ": expected 8 fields");
    ManifestRow row;
    try {
      row.img = std::stoi(trimmed(fields[0]));
      row.spill_date = trimmed(fields[1]);
      row.lat = std::stod(trimmed(fields[2]));
      row.lon = std::stod(trimmed(fields[3]));
      row.acq_date = trimmed(fields[4]);
      row.delta_days = std::stoi(trimmed(fields[5]));
      row.patches = std::stoi(trimmed(fields[6]));
      row.split = trimmed(fields[7]);
    } catch (const std::exception&) {
      throw ManifestParse("line " + std::to_string(line_no) +
                          ": malformed field");
    }
    if (row.split != "Train" && row.split != "Test")
      throw ManifestParse("line " + std::to_string(line_no) +
                          ": split must be Train or Test");
    rows.push_back(std::move(row));
  }
  return rows;
}

void check_split_leakage(const std::vector<ManifestRow>& rows) {
  std::map<int, std::string> seen;
  for (const ManifestRow& row : rows) {
    auto [it, inserted] = seen.emplace(row.img, row.split);
    if (!inserted && it->second != row.split)
      throw SplitLeakage("scene " + std::to_string(row.img) +
                         " appears in both splits");
  }
}

}  // namespace morp
