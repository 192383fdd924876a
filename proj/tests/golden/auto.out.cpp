void figure() {
int a = 32;
int **b = new int *(&a);
int * xp = &a, * yp = xp;
int * y = &a, ** z = &y;
}
int foo(int a) {

  return a;
}
void use() {
int x = foo(0);
const int & y = foo(1);
int (*fp)(int) = foo;
}
