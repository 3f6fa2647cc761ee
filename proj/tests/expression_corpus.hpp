#ifndef FRACLAP_TESTS_EXPRESSION_CORPUS_HPP
#define FRACLAP_TESTS_EXPRESSION_CORPUS_HPP

#include <string>
#include <vector>

// Shared 50-expression corpus exercising every grammar production, operator
// precedence corner, and whitespace tolerance.  Parsed against n = 2.
inline const std::vector<std::string>& expression_corpus() {
  static const std::vector<std::string> corpus = {
      "1",
      "-4",
      "--4",
      "0.75",
      "1e-3",
      ".5",
      "3.",
      "x1",
      "x2",
      "|x|",
      "delta",
      "1+2*3",
      "(1+2)*3",
      "1-2-3",
      "1-(2-3)",
      "6/3/2",
      "6/(3/2)",
      "2^3^2",
      "(2^3)^2",
      "-2^2",
      "(-2)^2",
      "2^-3",
      "-x1^2",
      "(-x1)^2",
      "x1*-x2",
      "x1--x2",
      "exp(-|x|^2)",
      "abs(x1-x2)",
      "min(x1,max(x2,0.5))",
      "max(0,1-|x|)",
      "pow(delta,0.3)",
      "inside((1-|x|^2)^0.75)",
      "delta^(-0.49)",
      "1e-3*x1+.5*x2",
      "  1 +  2 * ( 3 - x1 ) ",
      "inside(1)",
      "x1*x2*x1",
      "x1/(1+x2^2)",
      "-(x1+x2)",
      "-delta",
      "exp(x1)*exp(x2)",
      "abs(min(x1,-x2))",
      "2*inside(delta)",
      "(1-|x|^2)^2",
      "x1^2+x2^2",
      "pow(abs(x1),3)",
      "min(delta,0.1)^2",
      "1/delta",
      "exp(1)^x1",
      "-1*-1",
  };
  return corpus;
}

#endif  // FRACLAP_TESTS_EXPRESSION_CORPUS_HPP
