[[attr1, attr2, attr3(args)]]
void f();
[[namespace::attr(args)]]
int g(int x);
int h([[maybe_unused]] int y) { return y; }
