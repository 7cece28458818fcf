#include "anisoframe/coeff_seq.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "anisoframe/errors.hpp"
#include "anisoframe/format.hpp"

namespace anisoframe {

IndexSet support_of(const CoeffSeq& c) {
  IndexSet out;
  for (const auto& [q, v] : c) out.insert(out.end(), q);
  return out;
}

CoeffSeq restrict_to(const CoeffSeq& c, const IndexSet& gamma) {
  CoeffSeq out;
  for (const auto& q : gamma) {
    auto it = c.find(q);
    if (it != c.end()) out.emplace_hint(out.end(), q, it->second);
  }
  return out;
}

void write_coeff_seq(std::ostream& os, const CoeffSeq& c) {
  for (const auto& [q, v] : c) os << format_index(q) << ' ' << fmt17(v.real()) << ' ' << fmt17(v.imag()) << '\n';
}

CoeffSeq read_coeff_seq(std::istream& is) {
  CoeffSeq out;
  std::string line;
  while (std::getline(is, line)) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag != "C" && tag != "S") throw FormatError("coefficient line must start with C or S: " + line);
    std::vector<std::string> toks;
    std::string tok;
    while (ls >> tok) toks.push_back(tok);
    if (toks.size() < 3) throw FormatError("coefficient line too short: " + line);
    double re = 0, im = 0;
    try {
      std::size_t u1 = 0, u2 = 0;
      re = std::stod(toks[toks.size() - 2], &u1);
      im = std::stod(toks[toks.size() - 1], &u2);
      if (u1 != toks[toks.size() - 2].size() || u2 != toks.back().size()) throw FormatError("");
    } catch (const std::exception&) {
      throw FormatError("bad complex value in coefficient line: " + line);
    }
    std::vector<std::int64_t> f;
    for (std::size_t i = 0; i + 2 < toks.size(); ++i) {
      try {
        std::size_t used = 0;
        f.push_back(std::stoll(toks[i], &used));
        if (used != toks[i].size()) throw FormatError("");
      } catch (const std::exception&) {
        throw FormatError("bad integer in coefficient line: " + line);
      }
    }
    ShearIndex idx;
    try {
      idx = parse_index(f, tag == "C");
    } catch (const InvalidIndex& e) {
      throw FormatError(std::string("invalid index: ") + e.what());
    }
    if (!out.emplace(std::move(idx), Complex{re, im}).second) throw FormatError("duplicate index: " + line);
  }
  return out;
}

}  // namespace anisoframe
