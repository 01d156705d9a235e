#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstdlib>
#include <mutex>
#include <sstream>

#include "contract_detail.hpp"
#include "uasforge/error.hpp"

namespace uasforge {

namespace {

std::string smt_int(std::int64_t v) { return v < 0 ? "(- " + std::to_string(-v) + ")" : std::to_string(v); }

class Emitter {
public:
  Emitter(const TransitionSystem &ts) : ts_(ts) {}

  std::string term(const Expr &e, int step) const {
    auto bin = [&](const char *op) { return std::string("(") + op + " " + term(e.args[0], step) + " " + term(e.args[1], step) + ")"; };
    switch (e.op) {
    case ExprOp::const_int:
      return smt_int(e.value);
    case ExprOp::const_bool:
      return e.value ? "true" : "false";
    case ExprOp::var:
      return smt_symbol(ts_.variables[e.var], e.next ? step + 1 : step);
    case ExprOp::add:
      return bin("+");
    case ExprOp::sub:
      return bin("-");
    case ExprOp::mul:
      return bin("*");
    case ExprOp::div:
      return bin("div");
    case ExprOp::neg:
      return "(- " + term(e.args[0], step) + ")";
    case ExprOp::eq:
      return bin("=");
    case ExprOp::ne:
      return "(not " + bin("=") + ")";
    case ExprOp::lt:
      return bin("<");
    case ExprOp::le:
      return bin("<=");
    case ExprOp::gt:
      return bin(">");
    case ExprOp::ge:
      return bin(">=");
    case ExprOp::and_:
      return bin("and");
    case ExprOp::or_:
      return bin("or");
    case ExprOp::implies:
      return bin("=>");
    case ExprOp::not_:
      return "(not " + term(e.args[0], step) + ")";
    case ExprOp::ite:
      return "(ite " + term(e.args[0], step) + " " + term(e.args[1], step) + " " + term(e.args[2], step) + ")";
    case ExprOp::port_ref:
    case ExprOp::prev:
      break;
    }
    throw Error("TypeError", "unresolved expression in SMT emission");
  }

private:
  const TransitionSystem &ts_;
};

} // namespace

std::string smt_symbol(const Variable &v, int step) { return "|" + v.path + "_" + std::to_string(step) + "|"; }

std::string emit_smtlib(const TransitionSystem &ts, const Obligation &ob, int depth, SmtQuery query) {
  Emitter em(ts);
  std::ostringstream out;
  out << "(set-logic QF_LIA)\n";
  for (int t = 0; t <= depth; ++t)
    for (const auto &v : ts.variables)
      out << "(declare-fun " << smt_symbol(v, t) << " () " << (v.is_bool ? "Bool" : "Int") << ")\n";
  if (query == SmtQuery::base)
    out << "(assert " << em.term(ts.init(), 0) << ")\n";
  const Expr trans = ts.trans();
  const Expr step = ts.step(ob);
  for (int t = 0; t <= depth; ++t) {
    out << "; step " << t << "\n";
    out << "(assert " << em.term(step, t) << ")\n";
    if (t < depth) {
      out << "(assert " << em.term(trans, t) << ")\n";
      out << "(assert " << em.term(ob.property, t) << ")\n";
    }
  }
  out << "(assert (not " << em.term(ob.property, depth) << "))\n";
  out << "(check-sat)\n(get-model)\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Solver output

namespace {

struct Sexp {
  std::string atom;
  std::vector<Sexp> list;
  bool is_list = false;
};

class SexpReader {
public:
  explicit SexpReader(std::string_view s) : s_(s) {}

  std::optional<Sexp> next() {
    skip();
    if (i_ >= s_.size())
      return std::nullopt;
    if (s_[i_] == '(') {
      ++i_;
      Sexp x;
      x.is_list = true;
      while (true) {
        skip();
        if (i_ >= s_.size())
          return x;
        if (s_[i_] == ')') {
          ++i_;
          return x;
        }
        auto c = next();
        if (!c)
          return x;
        x.list.push_back(std::move(*c));
      }
    }
    if (s_[i_] == ')') {
      ++i_;
      return next();
    }
    Sexp a;
    if (s_[i_] == '|') {
      auto end = s_.find('|', i_ + 1);
      if (end == std::string_view::npos)
        end = s_.size();
      a.atom = std::string(s_.substr(i_, end - i_ + 1));
      i_ = end + 1;
      return a;
    }
    if (s_[i_] == '"') {
      auto end = s_.find('"', i_ + 1);
      if (end == std::string_view::npos)
        end = s_.size();
      a.atom = std::string(s_.substr(i_, end - i_ + 1));
      i_ = end + 1;
      return a;
    }
    std::size_t b = i_;
    while (i_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[i_])) && s_[i_] != '(' && s_[i_] != ')')
      ++i_;
    a.atom = std::string(s_.substr(b, i_ - b));
    return a;
  }

private:
  void skip() {
    while (i_ < s_.size()) {
      if (std::isspace(static_cast<unsigned char>(s_[i_]))) {
        ++i_;
      } else if (s_[i_] == ';') {
        while (i_ < s_.size() && s_[i_] != '\n')
          ++i_;
      } else {
        break;
      }
    }
  }

  std::string_view s_;
  std::size_t i_ = 0;
};

std::optional<std::int64_t> value_of(const Sexp &x) {
  if (!x.is_list) {
    if (x.atom == "true")
      return 1;
    if (x.atom == "false")
      return 0;
    try {
      std::size_t used = 0;
      auto v = std::stoll(x.atom, &used);
      if (used == x.atom.size())
        return v;
    } catch (...) {
    }
    return std::nullopt;
  }
  if (x.list.size() == 2 && !x.list[0].is_list && x.list[0].atom == "-")
    if (auto v = value_of(x.list[1]))
      return -*v;
  return std::nullopt;
}

void collect_defs(const Sexp &x, std::map<std::string, std::int64_t> &model) {
  if (!x.is_list)
    return;
  if (x.list.size() == 5 && !x.list[0].is_list && x.list[0].atom == "define-fun" && !x.list[1].is_list) {
    std::string name = x.list[1].atom;
    if (name.size() >= 2 && name.front() == '|' && name.back() == '|')
      name = name.substr(1, name.size() - 2);
    if (auto v = value_of(x.list[4]))
      model[name] = *v;
    return;
  }
  for (const auto &c : x.list)
    collect_defs(c, model);
}

} // namespace

SolverResult parse_solver_output(const std::string &text) {
  SolverResult r;
  r.raw = text;
  SexpReader reader(text);
  bool answered = false;
  while (auto x = reader.next()) {
    if (!answered && !x->is_list) {
      if (x->atom == "sat")
        r.answer = SolverResult::Answer::sat;
      else if (x->atom == "unsat")
        r.answer = SolverResult::Answer::unsat;
      else if (x->atom == "unknown")
        r.answer = SolverResult::Answer::unknown;
      else
        continue;
      answered = true;
      continue;
    }
    if (answered && r.answer == SolverResult::Answer::sat)
      collect_defs(*x, r.model);
  }
  if (!answered)
    throw Error("SolverUnavailable", "solver gave no answer: " + text.substr(0, 200));
  return r;
}

// ---------------------------------------------------------------------------
// Solver process

SolverResult run_solver(const std::string &command, const std::string &script, std::chrono::milliseconds timeout) {
  if (command.empty())
    throw Error("SolverUnavailable", "no solver command configured (set UASFORGE_SOLVER or --solver)");
  static std::once_flag sigpipe_once;
  std::call_once(sigpipe_once, [] {
    struct sigaction sa {};
    sigaction(SIGPIPE, nullptr, &sa);
    if (sa.sa_handler == SIG_DFL)
      signal(SIGPIPE, SIG_IGN);
  });

  int in_pipe[2], out_pipe[2];
  if (pipe(in_pipe) != 0)
    throw Error("SolverUnavailable", "pipe failed");
  if (pipe(out_pipe) != 0) {
    close(in_pipe[0]);
    close(in_pipe[1]);
    throw Error("SolverUnavailable", "pipe failed");
  }
  pid_t pid = fork();
  if (pid < 0)
    throw Error("SolverUnavailable", "fork failed");
  if (pid == 0) {
    dup2(in_pipe[0], 0);
    dup2(out_pipe[1], 1);
    int devnull = open("/dev/null", O_WRONLY);
    if (devnull >= 0)
      dup2(devnull, 2);
    close(in_pipe[0]);
    close(in_pipe[1]);
    close(out_pipe[0]);
    close(out_pipe[1]);
    setpgid(0, 0);
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char *>(nullptr));
    _exit(127);
  }
  close(in_pipe[0]);
  close(out_pipe[1]);
  int wfd = in_pipe[1], rfd = out_pipe[0];
  fcntl(wfd, F_SETFL, O_NONBLOCK);

  const auto deadline = std::chrono::steady_clock::now() + timeout;
  std::size_t written = 0;
  std::string output;
  bool timed_out = false;
  char buf[65536];
  while (true) {
    auto now = std::chrono::steady_clock::now();
    if (now >= deadline) {
      timed_out = true;
      break;
    }
    int wait_ms = static_cast<int>(std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count()) + 1;
    pollfd fds[2];
    int nfds = 0;
    fds[nfds++] = {rfd, POLLIN, 0};
    if (wfd >= 0)
      fds[nfds++] = {wfd, POLLOUT, 0};
    int rc = poll(fds, nfds, wait_ms);
    if (rc < 0 && errno == EINTR)
      continue;
    if (rc < 0)
      break;
    if (wfd >= 0 && (fds[1].revents & (POLLOUT | POLLERR | POLLHUP))) {
      ssize_t n = write(wfd, script.data() + written, script.size() - written);
      if (n > 0)
        written += static_cast<std::size_t>(n);
      if (n < 0 && errno != EAGAIN) {
        close(wfd);
        wfd = -1;
      } else if (written == script.size()) {
        close(wfd);
        wfd = -1;
      }
    }
    if (fds[0].revents & (POLLIN | POLLHUP | POLLERR)) {
      ssize_t n = read(rfd, buf, sizeof buf);
      if (n > 0)
        output.append(buf, static_cast<std::size_t>(n));
      else if (n == 0 || errno != EAGAIN)
        break;
    }
  }
  if (wfd >= 0)
    close(wfd);
  close(rfd);
  if (timed_out)
    kill(-pid, SIGKILL), kill(pid, SIGKILL);
  int status = 0;
  while (waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  if (timed_out)
    throw Error("SolverTimeout", "solver exceeded " + std::to_string(timeout.count()) + " ms");
  if (WIFEXITED(status) && WEXITSTATUS(status) == 127)
    throw Error("SolverUnavailable", "solver command not found: " + command);
  if (output.empty())
    throw Error("SolverUnavailable", "solver produced no output: " + command);
  return parse_solver_output(output);
}

bool solver_available(const std::string &command) {
  if (command.empty())
    return false;
  static std::mutex mu;
  static std::map<std::string, bool> cache;
  std::lock_guard lock(mu);
  if (auto it = cache.find(command); it != cache.end())
    return it->second;
  bool ok = false;
  try {
    ok = run_solver(command, "(check-sat)\n", std::chrono::seconds(10)).answer == SolverResult::Answer::sat;
  } catch (const Error &) {
    ok = false;
  }
  cache[command] = ok;
  return ok;
}

std::string default_solver() {
  const char *s = std::getenv("UASFORGE_SOLVER");
  return s ? s : "";
}

// ---------------------------------------------------------------------------
// Checks

namespace {

const Obligation &require_obligation(const TransitionSystem &ts, std::string_view name) {
  const auto *ob = ts.find_obligation(name);
  if (!ob)
    throw Error("UnknownObligation", "no obligation named '" + std::string(name) + "'");
  return *ob;
}

enum class Route { smt, enumerate };

Route route(const CheckOptions &o) {
  switch (o.backend) {
  case Backend::smt:
    return Route::smt;
  case Backend::enumerate:
    return Route::enumerate;
  case Backend::automatic:
    break;
  }
  return solver_available(o.solver) ? Route::smt : Route::enumerate;
}

template <class F> Verdict enumerate_or_explain(const CheckOptions &o, F &&f) {
  try {
    return f();
  } catch (const Error &e) {
    if (o.backend == Backend::automatic && e.code() == "UnboundedVariable")
      throw Error("SolverUnavailable",
                  "no usable SMT solver and the model has unbounded variables: " + std::string(e.what()));
    throw;
  }
}

CounterExample model_trace(const TransitionSystem &ts, const Obligation &ob, int depth, const SolverResult &r) {
  CounterExample cex;
  cex.obligation = ob.name;
  cex.values.assign(depth + 1, std::vector<std::int64_t>(ts.variables.size(), 0));
  for (int t = 0; t <= depth; ++t)
    for (std::size_t i = 0; i < ts.variables.size(); ++i) {
      auto sym = smt_symbol(ts.variables[i], t);
      auto it = r.model.find(sym.substr(1, sym.size() - 2));
      if (it != r.model.end())
        cex.values[t][i] = it->second;
    }
  return cex;
}

Verdict smt_verdict(VerdictStatus s, int k) {
  Verdict v;
  v.status = s;
  v.k = k;
  v.backend = "smt";
  return v;
}

SolverResult solve(const TransitionSystem &ts, const Obligation &ob, int depth, SmtQuery q, const CheckOptions &o) {
  return run_solver(o.solver, emit_smtlib(ts, ob, depth, q), o.timeout);
}

} // namespace

Verdict check_bmc(const TransitionSystem &ts, std::string_view obligation, int k, const CheckOptions &options) {
  const Obligation &ob = require_obligation(ts, obligation);
  if (route(options) == Route::enumerate)
    return enumerate_or_explain(options, [&] { return enumerate_check(ts, obligation, k, options.budget); });
  for (int d = 0; d < k; ++d) {
    auto r = solve(ts, ob, d, SmtQuery::base, options);
    if (r.answer == SolverResult::Answer::sat) {
      auto v = smt_verdict(VerdictStatus::falsified, k);
      v.cex = model_trace(ts, ob, d, r);
      return v;
    }
    if (r.answer == SolverResult::Answer::unknown) {
      auto v = smt_verdict(VerdictStatus::unknown, k);
      v.reason = "solver answered unknown at depth " + std::to_string(d);
      return v;
    }
  }
  return smt_verdict(VerdictStatus::valid_bounded, k);
}

Verdict check_kinduction(const TransitionSystem &ts, std::string_view obligation, int k,
                         const CheckOptions &options) {
  const Obligation &ob = require_obligation(ts, obligation);
  if (route(options) == Route::enumerate)
    return enumerate_or_explain(options, [&] { return enumerate_kinduction(ts, obligation, k, options.budget); });
  for (int j = 1; j <= k; ++j) {
    auto base = solve(ts, ob, j - 1, SmtQuery::base, options);
    if (base.answer == SolverResult::Answer::sat) {
      auto v = smt_verdict(VerdictStatus::falsified, j);
      v.cex = model_trace(ts, ob, j - 1, base);
      return v;
    }
    if (base.answer == SolverResult::Answer::unknown) {
      auto v = smt_verdict(VerdictStatus::unknown, j);
      v.reason = "solver answered unknown at depth " + std::to_string(j - 1);
      return v;
    }
    auto step = solve(ts, ob, j, SmtQuery::induction, options);
    if (step.answer == SolverResult::Answer::unsat)
      return smt_verdict(VerdictStatus::valid_inductive, j);
  }
  auto v = smt_verdict(VerdictStatus::unknown, k);
  v.reason = "not k-inductive for k <= " + std::to_string(k);
  return v;
}

std::vector<ObligationResult> verify_all(const TransitionSystem &ts, int k, const CheckOptions &options) {
  std::vector<ObligationResult> out;
  for (const auto &ob : ts.obligations) {
    ObligationResult r;
    r.obligation = &ob;
    try {
      r.verdict = check_kinduction(ts, ob.name, k, options);
      if (r.verdict.status == VerdictStatus::unknown) {
        auto bounded = check_bmc(ts, ob.name, k, options);
        if (bounded.status != VerdictStatus::unknown) {
          bounded.reason = r.verdict.reason;
          r.verdict = std::move(bounded);
        }
      }
    } catch (const Error &e) {
      r.error_code = e.code();
      r.error = e.what();
    }
    out.push_back(std::move(r));
  }
  return out;
}

} // namespace uasforge
