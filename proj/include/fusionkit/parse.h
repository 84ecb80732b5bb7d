#ifndef FUSIONKIT_PARSE_H_
#define FUSIONKIT_PARSE_H_

#include <string>
#include <vector>

#include "fusionkit/logic.h"

namespace fusionkit {

// Grammar:
//   formula := disj ('->' formula)?
//   disj    := conj ('|' conj)*
//   conj    := unary ('&' unary)*
//   unary   := '~' unary | quant | 'true' | 'false' | '(' formula ')' | atom
//   quant   := ('forall' | 'exists' | 'exists<=' K) ID ':' SORT '.' formula
//   atom    := REL '(' terms ')' | REL | term '=' term
//   term    := ID | ID ':' SORT | FUN '(' terms ')'
// Free variables get their sort from context, from `hints`, from an
// annotation, or from the only sort of a one-sorted signature.
Formula ParseFormula(const std::string& text, const Signature& sig,
                     const std::vector<Variable>& hints = {});
Term ParseTerm(const std::string& text, const Signature& sig,
               const std::vector<Variable>& hints = {});

std::string Print(const Formula& f);
std::string Print(const Term& t);
std::string Print(const Variable& v);  // name:sort

// Signature files:
//   sort NAME
//   rel NAME : S1 S2 ...
//   fun NAME : S1 ... -> S
//   lang LABEL uses SYM1 SYM2 ...
struct SignatureFile {
  Signature signature;
  LanguageFamily family;  // empty when there are no lang lines
};
SignatureFile ParseSignatureFile(const std::string& text);
SignatureFile LoadSignatureFile(const std::string& path);
std::string PrintSignature(const Signature& sig);

std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, const std::string& text);

bool IsIdentifier(const std::string& s);

// "x:V, y:W"; blank entries are skipped.
std::vector<Variable> ParseVariableList(const std::string& text);

}  // namespace fusionkit

#endif  // FUSIONKIT_PARSE_H_
