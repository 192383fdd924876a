#include <string>
using std::string;
class A {
  A() {}
  A(string str) : s(str)
  {
    t = "hello";
  }
  A(string str, int dbl)
    : A(str) {

    a = dbl;
  }
  int a = 1;
  string s;
  string t;
};
