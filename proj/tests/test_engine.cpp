#include <rwslice/engine.hpp>
#include <rwslice/label.hpp>
#include <rwslice/syntax.hpp>

#include <gtest/gtest.h>

using namespace rwslice;

namespace {

Term T(std::string_view s) { return parse_term(s); }
Position P(std::string_view s) { return *parse_position(s); }

const char* kTwoStep = R"(
mod EX1 is
  op f : 1 .  op g : 1 .  op m : 1 .  op a : 0 .  op b : 0 .
  vars X .
  rl [r1] : f(X) => b .
  rl [r2] : g(b) => m(a) .
endm
)";

void expect_replayable(const InstrumentedTrace& tr, const RewriteTheory& th) {
  ASSERT_TRUE(tr.is_chained());
  for (const auto& s : tr.steps) EXPECT_NO_THROW(validate_step(s, th)) << to_string(s.before);
}

}  // namespace

TEST(Builtins, Arithmetic) {
  const auto& reg = BuiltinRegistry::standard();
  std::vector<Term> args{T("7"), T("8")};
  EXPECT_EQ(*eval_builtin(*reg.find("+"), args), T("15"));
  std::vector<Term> zero{T("0"), T("42")};
  EXPECT_EQ(*eval_builtin(*reg.find("+"), zero), T("42"));
  std::vector<Term> neg{T("3"), T("5")};
  EXPECT_EQ(*eval_builtin(*reg.find("-"), neg), T("-2"));
  EXPECT_EQ(*eval_builtin(*reg.find("*"), neg), T("15"));
  std::vector<Term> big{T("99999999999999999999"), T("99999999999999999999")};
  EXPECT_EQ(*eval_builtin(*reg.find("*"), big), T("9999999999999999999800000000000000000001"));
  std::vector<Term> bad{T("a"), T("1")};
  EXPECT_FALSE(eval_builtin(*reg.find("+"), bad));
  std::vector<Term> div0{T("1"), T("0")};
  EXPECT_THROW(eval_builtin(*reg.find("div"), div0), ArithmeticError);
  EXPECT_THROW(eval_builtin(*reg.find("rem"), div0), ArithmeticError);
}

TEST(Builtins, BooleansAgainstTruthTable) {
  const auto& reg = BuiltinRegistry::standard();
  for (bool x : {false, true}) {
    std::vector<Term> one{boolean(x)};
    EXPECT_EQ(*eval_builtin(*reg.find("not"), one), boolean(!x));
    for (bool y : {false, true}) {
      std::vector<Term> two{boolean(x), boolean(y)};
      EXPECT_EQ(*eval_builtin(*reg.find("and"), two), boolean(x && y));
      EXPECT_EQ(*eval_builtin(*reg.find("or"), two), boolean(x || y));
      std::vector<Term> ite{boolean(x), boolean(y), T("c")};
      EXPECT_EQ(*eval_builtin(*reg.find("if-then-else"), ite), x ? boolean(y) : T("c"));
    }
  }
  std::vector<Term> ite{T("true"), T("a"), T("b")};
  EXPECT_EQ(*eval_builtin(*reg.find("if-then-else"), ite), T("a"));
  for (int a = -2; a <= 2; ++a)
    for (int b = -2; b <= 2; ++b) {
      std::vector<Term> ab{T(std::to_string(a)), T(std::to_string(b))};
      EXPECT_EQ(*eval_builtin(*reg.find("<"), ab), boolean(a < b));
      EXPECT_EQ(*eval_builtin(*reg.find("<="), ab), boolean(a <= b));
      EXPECT_EQ(*eval_builtin(*reg.find("=="), ab), boolean(a == b));
    }
}

TEST(Theory, Invariants) {
  RewriteTheory th;
  th.declare({"f", 2, true, false, std::nullopt});
  EXPECT_THROW(th.declare({"g", 3, true, false, std::nullopt}), InvalidTheory);
  EXPECT_THROW(th.declare({"F", 1, false, false, std::nullopt}), InvalidTheory);
  EXPECT_THROW(th.declare({"+", 2, false, false, std::nullopt}), InvalidTheory);
  th.declare({"+", 2, false, true, std::nullopt});
  th.declare({"a", 0, false, false, std::nullopt});
  EXPECT_THROW(th.add_rule("r", T("X"), T("a")), InvalidTheory);
  EXPECT_THROW(th.add_rule("r", T("f(X,a)"), T("Y")), InvalidTheory);
  EXPECT_THROW(th.add_rule("r", T("+(X,a)"), T("a")), InvalidTheory);
  th.add_rule("r", T("f(X,a)"), T("X"));
  EXPECT_THROW(th.add_equation("r", T("f(a,a)"), T("a")), InvalidTheory);
  const Rule& r = *th.find("r");
  EXPECT_TRUE(r.is_collapsing());
  EXPECT_TRUE(r.is_left_linear());
  EXPECT_EQ(Rule({"n", T("f(X,Y,X)"), T("Y")}).repeated_variables(), std::vector<std::string>{"X"});
}

TEST(Engine, TwoStep) {
  auto th = parse_theory(kTwoStep);
  auto s1 = rewrite_step_modulo_e(T("g(f(a))"), th);
  EXPECT_EQ(s1.term, T("g(b)"));
  ASSERT_EQ(s1.steps.size(), 1u);
  EXPECT_EQ(s1.steps[0].kind, StepKind::Rule);
  EXPECT_EQ(*s1.steps[0].rule_name, "r1");
  EXPECT_EQ(s1.steps[0].position, P("1"));
  auto s2 = rewrite_step_modulo_e(T("g(b)"), th);
  EXPECT_EQ(s2.term, T("m(a)"));
  ASSERT_EQ(s2.steps.size(), 1u);
  EXPECT_EQ(s2.steps[0].position, P("^"));
  EXPECT_THROW(rewrite_step_modulo_e(T("m(a)"), th), NoRuleApplicable);

  auto tr = run(T("g(f(a))"), th, 10);
  EXPECT_EQ(tr.rule_step_count(), 2u);
  EXPECT_EQ(tr.final_term(), T("m(a)"));
  EXPECT_EQ(tr.theory, "EX1");
  expect_replayable(tr, th);
  auto zero = run(T("g(f(a))"), th, 0);
  EXPECT_TRUE(zero.steps.empty());
}

TEST(Engine, ChosenApplication) {
  auto th = parse_theory(R"(
    op f : 2 [assoc comm] . op a : 0 . op b : 0 . op c : 0 . op k : 1 .
    rl [pick] : f(X,Y) => k(X) .
  )");
  auto r = rewrite_step_modulo_e(T("f(a,b,c)"), th, RuleChoice{"pick", P("^"), 2});
  EXPECT_EQ(r.term, T("k(a)"));
  ASSERT_EQ(r.steps.size(), 2u);
  EXPECT_EQ(r.steps[0].kind, StepKind::Unflat);
  EXPECT_EQ(r.steps[0].after, T("f(a,f(b,c))"));
  EXPECT_THROW(rewrite_step_modulo_e(T("f(a,b,c)"), th, RuleChoice{"pick", P("^"), 6}), NoRuleApplicable);
  EXPECT_THROW(rewrite_step_modulo_e(T("f(a,b,c)"), th, RuleChoice{"none", P("^"), 0}), NoRuleApplicable);
}

TEST(Engine, NormalizeBuiltinAndFlat) {
  auto th = parse_theory("op + : 2 [builtin] . op f : 2 [assoc comm] . op a : 0 . op b : 0 . op c : 0 .");
  auto n = normalize(T("+(7,8)"), th);
  EXPECT_EQ(n.term, T("15"));
  ASSERT_EQ(n.steps.size(), 1u);
  EXPECT_EQ(n.steps[0].kind, StepKind::Builtin);
  auto f = normalize(T("f(b,f(b,f(a,c)))"), th);
  EXPECT_EQ(f.term, T("f(a,b,b,c)"));
  for (const auto& s : f.steps) EXPECT_EQ(s.kind, StepKind::Flat);
  auto same = normalize(T("f(a,b)"), th);
  EXPECT_TRUE(same.steps.empty());
  EXPECT_TRUE(normalize(n.term, th).steps.empty());
  // Nested calls evaluate innermost first.
  auto nested = normalize(T("+(+(1,2),+(3,4))"), th);
  EXPECT_EQ(nested.term, T("10"));
  EXPECT_EQ(nested.steps.size(), 3u);
  EXPECT_EQ(nested.steps[0].position, P("1"));
}

TEST(Engine, EquationsAndBudget) {
  auto th = parse_theory(R"(
    op s : 1 . op z : 0 . op add : 2 . op loop : 0 .
    eq add(z,Y) = Y .
    eq add(s(X),Y) = s(add(X,Y)) .
    eq loop = loop .
  )");
  auto n = normalize(T("add(s(s(z)),s(z))"), th);
  EXPECT_EQ(n.term, T("s(s(s(z)))"));
  EXPECT_EQ(n.steps.size(), 3u);
  EXPECT_EQ(*n.steps[0].rule_name, "eq2");
  EXPECT_THROW(normalize(T("loop"), th, EngineOptions{50}), StepBudgetExceeded);
  try {
    normalize(T("loop"), th, EngineOptions{50});
  } catch (const StepBudgetExceeded& e) {
    EXPECT_EQ(e.budget(), 50u);
  }
}

TEST(Engine, NoEquationsGivesSingleRuleStep) {
  auto th = parse_theory("op f : 2 . op a : 0 . op b : 0 . rl [r] : f(X,Y) => f(Y,X) .");
  auto r = rewrite_step_modulo_e(T("f(a,b)"), th);
  ASSERT_EQ(r.steps.size(), 1u);
  EXPECT_EQ(r.steps[0].kind, StepKind::Rule);
}

TEST(Engine, Deterministic) {
  auto th = parse_theory(R"(
    op conf : 2 [assoc comm] . op msg : 1 . op srv : 1 . op + : 2 [builtin] .
    rl [recv] : conf(msg(N),srv(M)) => srv(+(N,M)) .
    rl [recv2] : conf(msg(N),srv(M),R) => conf(srv(+(N,M)),R) .
  )");
  Term t0 = T("conf(msg(3),msg(1),srv(0),msg(2))");
  auto a = run(t0, th, 10);
  auto b = run(t0, th, 10);
  EXPECT_EQ(a.steps, b.steps);
  EXPECT_EQ(a.final_term(), T("srv(6)"));
  expect_replayable(a, th);
}
