class A {
  virtual void b();
  virtual void c();
};
class B: public A {
  void b();
};
