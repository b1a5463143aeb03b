#include "shapes/corpus.hpp"

#include <fstream>
#include <sstream>

#include "shapes/config_check.hpp"
#include "shapes/eval.hpp"
#include "shapes/load.hpp"

namespace shapes {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string piece;
  std::istringstream in(s);
  while (std::getline(in, piece, sep)) out.push_back(piece);
  return out;
}

[[noreturn]] void bad_row(const std::string& line, const std::string& why) {
  throw std::runtime_error("bad manifest row (" + why + "): " + line);
}

}  // namespace

std::vector<CorpusEntry> load_manifest(const std::string& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw std::runtime_error("cannot read manifest '" + manifest_path + "'");
  std::vector<CorpusEntry> entries;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream row(line);
    std::string token;
    CorpusEntry entry;
    bool have_path = false, have_check = false;
    while (row >> token) {
      if (!have_path) {
        entry.path = token;
        have_path = true;
      } else if (token.rfind("check=", 0) == 0) {
        std::vector<std::string> parts = split(token.substr(6), ':');
        if (parts.empty() || parts.size() > 2) bad_row(line, "check= wants EXIT[:CODES]");
        entry.check_exit = std::stoi(parts[0]);
        if (parts.size() == 2) {
          for (const std::string& item : split(parts[1], ',')) {
            std::vector<std::string> at = split(item, '@');
            if (at.empty() || at.size() > 2) bad_row(line, "expected CODE[@LINE]");
            entry.check_diags.push_back(
                {at[0], at.size() == 2 ? std::stoi(at[1]) : 0});
          }
        }
        have_check = true;
      } else if (token.rfind("run=", 0) == 0) {
        // "Class::method:EXIT" splits on ':' as [Class, "", method, EXIT, ...].
        std::vector<std::string> parts = split(token.substr(4), ':');
        if (parts.size() < 4 || parts.size() > 5 || !parts[1].empty())
          bad_row(line, "run= wants Class::method:EXIT[:CODES]");
        entry.entry_class = parts[0];
        entry.entry_method = parts[2];
        entry.run_exit = std::stoi(parts[3]);
        if (parts.size() == 5) entry.run_codes = split(parts[4], ',');
      } else {
        bad_row(line, "unknown token '" + token + "'");
      }
    }
    if (!have_path) continue;  // blank or comment-only line
    if (!have_check) bad_row(line, "missing check=");
    entries.push_back(std::move(entry));
  }
  return entries;
}

CorpusOutcome validate_entry(const std::string& corpus_dir, const CorpusEntry& entry) {
  std::string path = corpus_dir + "/" + entry.path;
  LoadResult loaded = load_program_file(path);
  if (loaded.io_error) return {false, loaded.io_message};

  int check_exit = loaded.diagnostics.empty() ? 0 : 1;
  if (check_exit != entry.check_exit) {
    std::string got;
    for (const Diagnostic& d : loaded.diagnostics)
      got += " " + d.code + "@" + std::to_string(d.pos.line);
    return {false, entry.path + ": check exit " + std::to_string(check_exit) + ", expected " +
                       std::to_string(entry.check_exit) + (got.empty() ? "" : ";" + got)};
  }
  if (!entry.check_diags.empty()) {
    if (loaded.diagnostics.size() != entry.check_diags.size()) {
      std::string got;
      for (const Diagnostic& d : loaded.diagnostics)
        got += " " + d.code + "@" + std::to_string(d.pos.line);
      return {false, entry.path + ": expected " + std::to_string(entry.check_diags.size()) +
                         " diagnostic(s), got" + (got.empty() ? " none" : got)};
    }
    for (size_t i = 0; i < entry.check_diags.size(); ++i) {
      const Diagnostic& d = loaded.diagnostics[i];
      const ExpectedDiag& want = entry.check_diags[i];
      if (d.code != want.code || (want.line != 0 && d.pos.line != want.line))
        return {false, entry.path + ": diagnostic " + std::to_string(i) + " is " + d.code +
                           "@" + std::to_string(d.pos.line) + ", expected " + want.code + "@" +
                           std::to_string(want.line)};
    }
  }
  if (entry.run_exit < 0) return {true, ""};
  if (!loaded.program) return {false, entry.path + ": runnable row failed its check"};

  Heap heap;
  Evaluator ev(*loaded.program, heap);
  try {
    ev.run_entry(entry.entry_class, entry.entry_method);
  } catch (const RuntimeError& e) {
    if (entry.run_exit != 2)
      return {false, entry.path + ": unexpected runtime error " + e.code + ": " + e.what()};
    if (!entry.run_codes.empty() && (entry.run_codes.size() != 1 || entry.run_codes[0] != e.code))
      return {false, entry.path + ": runtime error " + e.code + ", expected " +
                         entry.run_codes[0]};
    return {true, ""};
  }
  if (entry.run_exit != 0)
    return {false, entry.path + ": ran clean, expected exit " + std::to_string(entry.run_exit)};
  return {true, ""};
}

Program rewrite_layouts(const Program& program, LayoutScheme scheme) {
  Program out = program;
  if (scheme == LayoutScheme::AsDeclared) return out;
  for (LayoutDecl& layout : out.layouts) {
    const ClassDecl* cls = nullptr;
    for (const ClassDecl& c : out.classes)
      if (c.name == layout.class_name) {
        cls = &c;
        break;
      }
    if (!cls) continue;  // ill-formed layout; leave as declared
    std::vector<std::vector<LayoutField>> clusters;
    if (scheme == LayoutScheme::SingleCluster) {
      std::vector<LayoutField> all;
      for (const FieldDecl& f : cls->fields) all.push_back({f.name, layout.pos});
      clusters.push_back(std::move(all));
    } else {
      for (const FieldDecl& f : cls->fields) clusters.push_back({{f.name, layout.pos}});
    }
    layout.clusters = std::move(clusters);
  }
  return out;
}

}  // namespace shapes
