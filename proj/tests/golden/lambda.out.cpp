#include <algorithm>
#include <vector>
void run() {
std::vector<int> v(6);
int inc = 7;
class LambdaFunctor__12_1{
  int& inc;
public:
  LambdaFunctor__12_1(
    int& inc) : inc(inc) {}
  void operator()(int & n){
    n += inc;
  }
};
std::for_each(
  v.begin(),
  v.end(),
  (LambdaFunctor__12_1(inc))
);
}
