#include <string>
struct A {
  int a { 3 };
  std::string s = "s";
  
  
};

union B {
  double a = 3.5;
  int b;
 
};

class C {
public:
  C(int _b) : b(_b) {
  }
private:
  int a = 1;
  int b = 2;
};
