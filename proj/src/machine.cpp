#include "gmx/machine.hpp"

#include <algorithm>
#include <regex>
#include <set>
#include <sstream>
#include <stdexcept>

namespace gmx {

void SramProgram::validate() const {
  for (std::size_t i = 0; i < commands.size(); ++i) {
    if (commands[i].label != static_cast<int>(i) + 1)
      throw std::invalid_argument("labels must be contiguous from 1, got " +
                                  std::to_string(commands[i].label));
    if (commands[i].kind == SramCommand::Kind::Cond) {
      for (int target : {commands[i].l0, commands[i].l1})
        if (target < 1 || target > halt_label())
          throw std::invalid_argument("cond target out of range: " +
                                      std::to_string(target));
    }
  }
}

void PramProgram::validate() const {
  if (processors.empty())
    throw std::invalid_argument("a PRAM needs at least one processor");
  for (const auto& m : processors) m.validate();
}

namespace {

const std::regex kLine(R"(^\s*(\d+)\s*:\s*(.*?)\s*$)");
const std::regex kSkip(R"(^skip$)");
const std::regex kCond(
    R"(^if\s+X(\d+)\s*=\s*0\s+goto\s+(\d+)\s+else\s+(\d+)$)");
const std::regex kWriteRef(R"(^#X(\d+)\s*:=\s*X(\d+)$)");
const std::regex kReadRef(R"(^X(\d+)\s*:=\s*#X(\d+)$)");
const std::regex kBinop(R"(^X(\d+)\s*:=\s*X(\d+)\s*([-+*/])\s*X(\d+)$)");
const std::regex kCopy(R"(^X(\d+)\s*:=\s*X(\d+)$)");
const std::regex kConst(R"(^X(\d+)\s*:=\s*(-?\d+)$)");

SramCommand parse_command(const std::string& body, int label, int lineno) {
  SramCommand c;
  c.label = label;
  std::smatch m;
  if (std::regex_match(body, m, kSkip)) {
    c.kind = SramCommand::Kind::Skip;
  } else if (std::regex_match(body, m, kCond)) {
    c.kind = SramCommand::Kind::Cond;
    c.i = std::stol(m[1]);
    c.l0 = std::stoi(m[2]);
    c.l1 = std::stoi(m[3]);
  } else if (std::regex_match(body, m, kWriteRef)) {
    c.kind = SramCommand::Kind::WriteRef;
    c.i = std::stol(m[1]);
    c.j = std::stol(m[2]);
  } else if (std::regex_match(body, m, kReadRef)) {
    c.kind = SramCommand::Kind::ReadRef;
    c.i = std::stol(m[1]);
    c.j = std::stol(m[2]);
  } else if (std::regex_match(body, m, kBinop)) {
    c.kind = SramCommand::Kind::Binop;
    c.i = std::stol(m[1]);
    c.j = std::stol(m[2]);
    c.op = m[3].str()[0];
    c.k = std::stol(m[4]);
  } else if (std::regex_match(body, m, kCopy)) {
    c.kind = SramCommand::Kind::Copy;
    c.i = std::stol(m[1]);
    c.j = std::stol(m[2]);
  } else if (std::regex_match(body, m, kConst)) {
    c.kind = SramCommand::Kind::Const;
    c.i = std::stol(m[1]);
    c.c = Int(m[2].str());
  } else {
    throw std::invalid_argument("line " + std::to_string(lineno) +
                                ": cannot parse command \"" + body + "\"");
  }
  return c;
}

}  // namespace

SramProgram parse_sram(const std::string& text) {
  SramProgram prog;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::smatch m;
    if (!std::regex_match(line, m, kLine))
      throw std::invalid_argument("line " + std::to_string(lineno) +
                                  ": expected \"label: command\"");
    prog.commands.push_back(
        parse_command(m[2].str(), std::stoi(m[1]), lineno));
  }
  prog.validate();
  return prog;
}

std::string print_sram(const SramProgram& prog) {
  std::ostringstream os;
  for (const auto& c : prog.commands) {
    os << c.label << ": ";
    switch (c.kind) {
      case SramCommand::Kind::Skip:
        os << "skip";
        break;
      case SramCommand::Kind::Const:
        os << "X" << c.i << " := " << c.c.get_str();
        break;
      case SramCommand::Kind::Copy:
        os << "X" << c.i << " := X" << c.j;
        break;
      case SramCommand::Kind::Binop:
        os << "X" << c.i << " := X" << c.j << " " << c.op << " X" << c.k;
        break;
      case SramCommand::Kind::ReadRef:
        os << "X" << c.i << " := #X" << c.j;
        break;
      case SramCommand::Kind::WriteRef:
        os << "#X" << c.i << " := X" << c.j;
        break;
      case SramCommand::Kind::Cond:
        os << "if X" << c.i << " = 0 goto " << c.l0 << " else " << c.l1;
        break;
    }
    os << "\n";
  }
  return os.str();
}

PramProgram parse_pram(const std::string& text) {
  PramProgram prog;
  std::istringstream in(text);
  std::string line, block;
  auto flush = [&] {
    prog.processors.push_back(parse_sram(block));
    block.clear();
  };
  while (std::getline(in, line)) {
    std::string trimmed = line;
    trimmed.erase(trimmed.find_last_not_of(" \t\r") + 1);
    if (trimmed == "---") {
      flush();
    } else {
      block += line;
      block += "\n";
    }
  }
  flush();
  prog.validate();
  return prog;
}

std::string print_pram(const PramProgram& p) {
  std::ostringstream os;
  for (std::size_t q = 0; q < p.processors.size(); ++q) {
    if (q) os << "---\n";
    os << print_sram(p.processors[q]);
  }
  return os.str();
}

namespace {

long shared_address(const Rat& v) {
  if (!is_integer(v) || v < 0)
    throw std::runtime_error("bad indirect address " + rat_to_string(v));
  return static_cast<long>(v.get_num().get_si());
}

Rat binop_value(const SramCommand& c, const Rat& a, const Rat& b) {
  switch (c.op) {
    case '+': return a + b;
    case '-': return a - b;
    case '*': return a * b;
    case '/': return Rat(euclidean_div(a.get_num(), b.get_num()));
  }
  throw std::logic_error("bad binop");
}

}  // namespace

MachineConfig pram_step(const PramProgram& p, const MachineConfig& cfg) {
  const Memory& snap = cfg.mem;
  MachineConfig out = cfg;
  struct SharedWrite {
    long cell;
    Rat value;
  };
  std::vector<SharedWrite> writes;  // in processor order
  std::set<long> written;
  for (std::size_t q = 0; q < p.processors.size(); ++q) {
    const SramProgram& prog = p.processors[q];
    int label = cfg.labels[q];
    if (label > static_cast<int>(prog.commands.size())) continue;  // halted
    const SramCommand& c = prog.commands[label - 1];
    int block = static_cast<int>(q) + 1;
    auto reg = [&](long idx) { return Coord{block, idx}; };
    int next = label + 1;
    switch (c.kind) {
      case SramCommand::Kind::Skip:
        break;
      case SramCommand::Kind::Const:
        out.mem.set(reg(c.i), Rat(c.c));
        break;
      case SramCommand::Kind::Copy:
        out.mem.set(reg(c.i), snap.get(reg(c.j)));
        break;
      case SramCommand::Kind::Binop:
        out.mem.set(reg(c.i),
                    binop_value(c, snap.get(reg(c.j)), snap.get(reg(c.k))));
        break;
      case SramCommand::Kind::ReadRef:
        out.mem.set(reg(c.i),
                    snap.get({0, shared_address(snap.get(reg(c.j)))}));
        break;
      case SramCommand::Kind::WriteRef: {
        long cell = shared_address(snap.get(reg(c.i)));
        if (!written.count(cell)) {
          written.insert(cell);
          writes.push_back({cell, snap.get(reg(c.j))});
        }
        break;
      }
      case SramCommand::Kind::Cond:
        next = snap.get(reg(c.i)) == 0 ? c.l0 : c.l1;
        break;
    }
    out.labels[q] = next;
  }
  for (const auto& w : writes) out.mem.set({0, w.cell}, w.value);
  return out;
}

MachineConfig sram_step(const SramProgram& m, const MachineConfig& cfg) {
  return pram_step(PramProgram{{m}}, cfg);
}

bool machine_halted(const PramProgram& p, const MachineConfig& cfg) {
  for (std::size_t q = 0; q < p.processors.size(); ++q)
    if (cfg.labels[q] <= static_cast<int>(p.processors[q].commands.size()))
      return false;
  return true;
}

namespace {

std::string command_symbol(const SramCommand& c) {
  std::ostringstream os;
  switch (c.kind) {
    case SramCommand::Kind::Const:
      os << "const(" << c.i << "," << c.c.get_str() << ")";
      break;
    case SramCommand::Kind::Copy:
      os << "copy(" << c.i << "," << c.j << ")";
      break;
    case SramCommand::Kind::Binop:
      os << (c.op == '+'   ? "add"
             : c.op == '-' ? "sub"
             : c.op == '*' ? "mul"
                           : "euclidiv")
         << "(" << c.i << "," << c.j << "," << c.k << ")";
      break;
    case SramCommand::Kind::ReadRef:
      os << "readref(" << c.i << "," << c.j << ")";
      break;
    case SramCommand::Kind::WriteRef:
      os << "writeref(" << c.i << "," << c.j << ")";
      break;
    default:
      throw std::logic_error("command has no generator");
  }
  return os.str();
}

std::vector<std::string> collect_symbols(const PramProgram& p) {
  std::vector<std::string> out;
  for (const auto& prog : p.processors)
    for (const auto& c : prog.commands) {
      if (c.kind == SramCommand::Kind::Skip ||
          c.kind == SramCommand::Kind::Cond)
        continue;
      std::string s = command_symbol(c);
      if (std::find(out.begin(), out.end(), s) == out.end())
        out.push_back(s);
    }
  return out;
}

}  // namespace

GraphingRep compile_sram(const SramProgram& m) {
  m.validate();
  GraphingRep g;
  g.amc = std::make_shared<Amc>(sram_amc(collect_symbols(PramProgram{{m}})));
  for (int l = 1; l <= m.halt_label(); ++l)
    g.states.push_back(std::to_string(l));
  g.top = g.states.back();
  for (const auto& c : m.commands) {
    State src = std::to_string(c.label);
    State next = std::to_string(c.label + 1);
    if (c.kind == SramCommand::Kind::Cond) {
      Coord xi{1, c.i};
      g.edges.push_back({Region::sign_of(xi, Rel::Eq), src, {},
                         std::to_string(c.l0)});
      g.edges.push_back({Region::sign_of(xi, Rel::Ne), src, {},
                         std::to_string(c.l1)});
    } else if (c.kind == SramCommand::Kind::Skip) {
      g.edges.push_back({Region::whole(), src, {}, next});
    } else {
      g.edges.push_back({Region::whole(), src, {command_symbol(c)}, next});
    }
  }
  g.validate();
  return g;
}

namespace {

/// One processor's possible step at a fixed label.
struct Micro {
  Region guard;  // on the processor's own registers
  const SramCommand* cmd = nullptr;  // null: no memory effect (skip/cond/halt)
  int next = 0;
};

std::vector<Micro> micro_edges(const SramProgram& prog, int label, int block) {
  std::vector<Micro> out;
  if (label > static_cast<int>(prog.commands.size())) {
    out.push_back({Region::whole(), nullptr, label});
    return out;
  }
  const SramCommand& c = prog.commands[label - 1];
  if (c.kind == SramCommand::Kind::Cond) {
    Coord xi{block, c.i};
    out.push_back({Region::sign_of(xi, Rel::Eq), nullptr, c.l0});
    out.push_back({Region::sign_of(xi, Rel::Ne), nullptr, c.l1});
  } else if (c.kind == SramCommand::Kind::Skip) {
    out.push_back({Region::whole(), nullptr, label + 1});
  } else {
    out.push_back({Region::whole(), &c, label + 1});
  }
  return out;
}

/// All set partitions of {0..n-1} as block-index vectors.
void set_partitions(std::size_t n, std::vector<int>& assign, int blocks,
                    std::vector<std::vector<int>>& out) {
  if (assign.size() == n) {
    out.push_back(assign);
    return;
  }
  for (int b = 0; b <= blocks; ++b) {
    assign.push_back(b);
    set_partitions(n, assign, std::max(blocks, b + 1), out);
    assign.pop_back();
  }
}

int command_phase(const SramCommand& c) {
  if (c.kind == SramCommand::Kind::ReadRef) return 0;
  if (c.kind == SramCommand::Kind::WriteRef) return 2;
  return 1;
}

}  // namespace

GraphingRep compile_pram(const PramProgram& p) {
  p.validate();
  std::size_t np = p.processors.size();
  GraphingRep g;
  Amc base = sram_amc(collect_symbols(p));
  g.amc = std::make_shared<Amc>(crew_power(base, static_cast<int>(np)));

  auto state_name = [](const std::vector<int>& labels) {
    std::ostringstream os;
    for (std::size_t q = 0; q < labels.size(); ++q) {
      if (q) os << ",";
      os << labels[q];
    }
    return os.str();
  };

  std::vector<int> halt;
  for (const auto& prog : p.processors) halt.push_back(prog.halt_label());

  // product states in lexicographic order, (1,...,1) first
  std::vector<std::vector<int>> all_states;
  std::vector<int> labels(np, 1);
  for (bool more = true; more;) {
    all_states.push_back(labels);
    more = false;
    for (std::size_t q = np; q-- > 0;) {
      if (labels[q] < halt[q]) {
        ++labels[q];
        more = true;
        break;
      }
      labels[q] = 1;
    }
  }
  for (const auto& ls : all_states) g.states.push_back(state_name(ls));
  g.top = state_name(halt);

  for (const auto& ls : all_states) {
    if (ls == halt) continue;
    State src = state_name(ls);
    std::vector<std::vector<Micro>> options;
    for (std::size_t q = 0; q < np; ++q)
      options.push_back(
          micro_edges(p.processors[q], ls[q], static_cast<int>(q) + 1));

    std::vector<std::size_t> pick(np, 0);
    for (bool more = true; more;) {
      Region guard = Region::whole();
      std::vector<int> next(np);
      std::vector<const SramCommand*> cmds(np, nullptr);
      std::vector<std::size_t> writers;
      for (std::size_t q = 0; q < np; ++q) {
        const Micro& mic = options[q][pick[q]];
        guard = guard.intersect(mic.guard);
        next[q] = mic.next;
        cmds[q] = mic.cmd;
        if (mic.cmd && mic.cmd->kind == SramCommand::Kind::WriteRef)
          writers.push_back(q);
      }
      State dst = state_name(next);

      auto emit = [&](const Region& source,
                      const std::set<std::size_t>& suppressed) {
        if (source.is_empty()) return;
        Word realiser;
        for (int phase = 0; phase < 3; ++phase)
          for (std::size_t q = 0; q < np; ++q) {
            if (!cmds[q] || command_phase(*cmds[q]) != phase) continue;
            if (phase == 2 && suppressed.count(q)) continue;
            realiser.push_back(std::to_string(q + 1) + "." +
                               command_symbol(*cmds[q]));
          }
        g.edges.push_back({source, src, realiser, dst});
      };

      if (writers.size() <= 1) {
        emit(guard, {});
      } else {
        std::vector<std::vector<int>> partitions;
        std::vector<int> assign;
        set_partitions(writers.size(), assign, 0, partitions);
        for (const auto& part : partitions) {
          Region source = guard;
          std::set<std::size_t> suppressed;
          std::map<int, std::size_t> leader;  // partition block -> writer
          for (std::size_t wi = 0; wi < writers.size(); ++wi) {
            std::size_t q = writers[wi];
            Coord ptr{static_cast<int>(q) + 1,
                      p.processors[q].commands[ls[q] - 1].i};
            auto it = leader.find(part[wi]);
            if (it == leader.end()) {
              leader[part[wi]] = q;
            } else {
              suppressed.insert(q);
              Coord lead_ptr{static_cast<int>(it->second) + 1,
                             p.processors[it->second]
                                 .commands[ls[it->second] - 1]
                                 .i};
              source = source.intersect(Region::coord_eq(lead_ptr, ptr));
            }
            // distinct cells across partition blocks
            for (std::size_t wj = 0; wj < wi; ++wj)
              if (part[wj] != part[wi]) {
                std::size_t r = writers[wj];
                Coord other{static_cast<int>(r) + 1,
                            p.processors[r].commands[ls[r] - 1].i};
                source = source.intersect(Region::coord_ne(other, ptr));
              }
          }
          emit(source, suppressed);
        }
      }

      more = false;
      for (std::size_t q = np; q-- > 0;) {
        if (++pick[q] < options[q].size()) {
          more = true;
          break;
        }
        pick[q] = 0;
      }
    }
  }
  g.validate();
  return g;
}

MachineConfig initial_config(const PramProgram& p, const std::vector<Int>& x) {
  MachineConfig cfg;
  cfg.mem.ensure_blocks(p.processors.size() + 1);
  cfg.mem.set({0, 0}, Rat(static_cast<long>(x.size())));
  for (std::size_t i = 0; i < x.size(); ++i)
    cfg.mem.set({0, static_cast<long>(i) + 1}, Rat(x[i]));
  cfg.labels.assign(p.processors.size(), 1);
  return cfg;
}

ConfigPoint initial_point(const GraphingRep& g, const std::vector<Int>& x) {
  ConfigPoint pt;
  if (g.amc) pt.mem.ensure_blocks(g.amc->space.blocks.size());
  pt.mem.set({0, 0}, Rat(static_cast<long>(x.size())));
  for (std::size_t i = 0; i < x.size(); ++i)
    pt.mem.set({0, static_cast<long>(i) + 1}, Rat(x[i]));
  pt.state = g.states.empty() ? State{} : g.states.front();
  return pt;
}

AcceptResult accepts(const GraphingRep& g, const std::vector<Int>& x,
                     int budget) {
  if (!g.top) throw std::invalid_argument("graphing has no top state");
  AcceptResult r;
  ConfigPoint cur = initial_point(g, x);
  for (int i = 0; i <= budget; ++i) {
    if (cur.state == *g.top) {
      r.accepted = true;
      r.steps = static_cast<std::size_t>(i);
      return r;
    }
    if (i == budget) break;
    StepResult s = step(g, cur);
    if (s.halted) {
      r.steps = static_cast<std::size_t>(i);
      return r;
    }
    cur = std::move(s.point);
  }
  r.steps = static_cast<std::size_t>(budget);
  StepResult probe = step(g, cur);
  r.timeout = !probe.halted;
  return r;
}

}  // namespace gmx
